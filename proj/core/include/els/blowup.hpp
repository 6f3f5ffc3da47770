#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "els/director.hpp"
#include "els/grid.hpp"

namespace els {

struct ConcentrationCandidate {
    std::vector<double> times;   // T_i, increasing
    std::vector<double> radii;   // R_i
    std::vector<double> ratios;  // R_i / (T0 - T_i)
    double epsilon1;
    double t0;  // flagged blowup time
    bool resolution_limited = false;  // probe hit the 4*dr floor
};

struct ProfileFit {
    double c_fit;
    double residual_l2;
    double r_lo, r_hi;         // fit window
    double harmonic_residual;  // discrete residual of the harmonic-map ODE
};

struct BlowupReport {
    ConcentrationCandidate candidate;
    // (phi_i, h_i) on the comparison grid, one pair per candidate index.
    std::vector<std::pair<RadialField, RadialField>> rescaled_profiles;
    std::vector<double> c_fits;        // fitted C per profile
    ProfileFit fit;                    // fit of the last profile
    std::vector<double> h_sup_rescaled;
};

/// Smallest R with E(6R, t) in [eps1, 2*eps1], by bisection on the
/// monotone map R -> E(6R, t). Empty when the total energy is below eps1.
std::optional<double> select_concentration_radius(const FieldState& state,
                                                  double epsilon1);

/// Flags the first snapshot time where E(r_c, t) >= eps0 for the shrinking
/// probe r_c(t) = max(6 R(t), 4 dr), and emits the (T_i, R_i) sequences for
/// the last `history` snapshots before it. Requires 3*eps1 < eps0.
std::optional<ConcentrationCandidate> detect_blowup(const Trajectory& traj,
                                                    double epsilon0,
                                                    double epsilon1,
                                                    std::size_t history = 8);

/// Wave-scaling time slice: phi_i(r) = phi(R_i r, T_i), h_i(r) = h(R_i r, T_i),
/// linearly interpolated onto the comparison grid (linear in time between
/// bracketing snapshots when T_i is not a snapshot time).
std::pair<RadialField, RadialField> rescale_profile(const Trajectory& traj,
                                                    double R_i, double T_i,
                                                    const RadialGrid& comparison);

/// One-parameter least squares of 2*arctan(r/C) against the profile on
/// [r_lo, r_hi], golden-section search over log C.
ProfileFit fit_harmonic_profile(const RadialField& profile, double r_lo,
                                double r_hi);

/// Synthetic self-similar trajectory phi(r,t) = 2 arctan(r / lambda(t)),
/// v = h = 0, for validating the analyzer. lambda_dot may be omitted
/// (numerical differentiation of the schedule is used instead).
Trajectory synth_selfsimilar(const std::function<double(double)>& lambda,
                             const RadialGrid& grid,
                             const std::vector<double>& times,
                             const std::function<double(double)>& lambda_dot = {});

/// Full pipeline: detect, rescale each candidate, fit each profile.
/// Empty when no concentration is detected.
std::optional<BlowupReport> analyze_blowup(const Trajectory& traj,
                                           double epsilon0, double epsilon1,
                                           const RadialGrid& comparison,
                                           double fit_r_lo, double fit_r_hi,
                                           std::size_t history = 8);

}  // namespace els
