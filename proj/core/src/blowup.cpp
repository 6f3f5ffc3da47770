#include "els/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "els/diagnostics.hpp"
#include "els/errors.hpp"

namespace els {

std::optional<double> select_concentration_radius(const FieldState& state,
                                                  double epsilon1) {
    if (!(epsilon1 > 0.0)) {
        throw ConfigError("select_concentration_radius: epsilon1 must be positive");
    }
    const RadialField e = energy_density(state);
    const double r_max = state.grid.r_max();
    if (integrate_radial(e) < epsilon1) return std::nullopt;

    // E(6R) is continuous and non-decreasing in R; bisect for the crossing
    // E(6R) = eps1, which is the smallest admissible radius.
    double lo = 0.0, hi = r_max / 6.0;
    if (integrate_radial(e, 0.0, 6.0 * hi) < epsilon1) return std::nullopt;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (integrate_radial(e, 0.0, 6.0 * mid) < epsilon1) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

std::optional<ConcentrationCandidate> detect_blowup(const Trajectory& traj,
                                                    double epsilon0,
                                                    double epsilon1,
                                                    std::size_t history) {
    if (!(3.0 * epsilon1 < epsilon0)) {
        throw ConfigError("detect_blowup: requires 3*epsilon1 < epsilon0");
    }
    const double dr = traj.grid.dr();
    const double floor = 4.0 * dr;

    std::vector<double> times, radii;
    bool hit_floor = false;
    for (const FieldState& s : traj.snapshots) {
        const auto R = select_concentration_radius(s, epsilon1);
        if (!R) continue;
        const double r_c = std::max(6.0 * (*R), floor);
        if (6.0 * (*R) < floor) hit_floor = true;
        const double E_probe = local_energy(s, r_c);
        if (E_probe >= epsilon0) {
            ConcentrationCandidate cand;
            cand.epsilon1 = epsilon1;
            cand.t0 = s.time;
            cand.resolution_limited = hit_floor;
            const std::size_t n_keep = std::min(history, times.size());
            for (std::size_t i = times.size() - n_keep; i < times.size(); ++i) {
                cand.times.push_back(times[i]);
                cand.radii.push_back(radii[i]);
                cand.ratios.push_back(radii[i] / (cand.t0 - times[i]));
            }
            return cand;
        }
        times.push_back(s.time);
        radii.push_back(*R);
    }
    return std::nullopt;
}

namespace {

// Linear time interpolation of (phi, h) at t between the bracketing snapshots.
std::pair<const FieldState*, const FieldState*> bracket(const Trajectory& traj,
                                                        double t) {
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
        if (traj.snapshots[i].time >= t - 1e-12) {
            return {&traj.snapshots[i - 1], &traj.snapshots[i]};
        }
    }
    throw RangeError("rescale_profile: time outside the trajectory");
}

}  // namespace

std::pair<RadialField, RadialField> rescale_profile(const Trajectory& traj,
                                                    double R_i, double T_i,
                                                    const RadialGrid& comparison) {
    if (!(R_i > 0.0) || R_i * comparison.r_max() > traj.grid.r_max() + 1e-12) {
        throw RangeError("rescale_profile: scaled window exceeds the source domain");
    }
    const auto [a, b] = bracket(traj, T_i);
    const double span = b->time - a->time;
    const double s = span > 0.0 ? std::clamp((T_i - a->time) / span, 0.0, 1.0) : 0.0;

    RadialField phi_i(comparison), h_i(comparison);
    for (std::size_t j = 0; j < comparison.n_nodes(); ++j) {
        const double r_src = R_i * comparison.node(j);
        phi_i[j] = (1.0 - s) * interp(a->phi, r_src) + s * interp(b->phi, r_src);
        h_i[j] = (1.0 - s) * interp(a->h, r_src) + s * interp(b->h, r_src);
    }
    return {phi_i, h_i};
}

ProfileFit fit_harmonic_profile(const RadialField& profile, double r_lo,
                                double r_hi) {
    const RadialGrid& g = profile.grid;
    if (!(0.0 <= r_lo && r_lo < r_hi && r_hi <= g.r_max() + 1e-12)) {
        throw RangeError("fit_harmonic_profile: window outside profile grid");
    }
    std::vector<std::size_t> window;
    double window_max = 0.0;
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        const double r = g.node(j);
        if (r >= r_lo - 1e-12 && r <= r_hi + 1e-12) {
            window.push_back(j);
            window_max = std::max(window_max, std::abs(profile[j]));
        }
    }
    if (window.size() < 4 || window_max <= 0.1) {
        throw FitDegenerateError("fit_harmonic_profile: trivial profile on window");
    }

    const auto objective = [&](double log_c) {
        const double c = std::exp(log_c);
        double sq = 0.0;
        for (std::size_t j : window) {
            const double r = g.node(j);
            const double d = profile[j] - 2.0 * std::atan(r / c);
            sq += d * d * r * g.dr();
        }
        return sq;
    };

    // Golden-section over log C in [log dr, log r_max].
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(g.dr()), hi = std::log(g.r_max());
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = objective(x2);
        }
    }
    const double log_c = 0.5 * (lo + hi);

    ProfileFit fit{};
    fit.c_fit = std::exp(log_c);
    fit.residual_l2 = std::sqrt(objective(log_c));
    fit.r_lo = r_lo;
    fit.r_hi = r_hi;

    // Discrete residual of phi_rr + phi_r/r - sin phi cos phi / r^2 on the
    // window interior.
    double res_sq = 0.0;
    const double dr = g.dr();
    for (std::size_t j : window) {
        if (j == 0 || j == g.n_cells()) continue;
        if (g.node(j) <= r_lo + 0.5 * dr || g.node(j) >= r_hi - 0.5 * dr) continue;
        const double r = g.node(j);
        const double phi_rr = (profile[j + 1] - 2.0 * profile[j] + profile[j - 1]) / (dr * dr);
        const double phi_r = (profile[j + 1] - profile[j - 1]) / (2.0 * dr);
        const double res = phi_rr + phi_r / r -
                           std::sin(profile[j]) * std::cos(profile[j]) / (r * r);
        res_sq += res * res * r * dr;
    }
    fit.harmonic_residual = std::sqrt(res_sq);
    return fit;
}

Trajectory synth_selfsimilar(const std::function<double(double)>& lambda,
                             const RadialGrid& grid,
                             const std::vector<double>& times,
                             const std::function<double(double)>& lambda_dot) {
    Trajectory traj(grid);
    traj.synthetic = true;
    double prev_lambda = std::numeric_limits<double>::infinity();
    for (double t : times) {
        const double lam = lambda(t);
        if (!(lam > 0.0) || lam > prev_lambda + 1e-12) {
            throw ConfigError("synth_selfsimilar: lambda must be positive and decreasing");
        }
        prev_lambda = lam;
        const double dlam = lambda_dot
                                ? lambda_dot(t)
                                : (lambda(t + 1e-6) - lambda(t - 1e-6)) / 2e-6;
        FieldState s(grid);
        s.time = t;
        for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
            const double r = grid.node(j);
            s.phi[j] = 2.0 * std::atan(r / lam);
            s.phi_t[j] = -2.0 * r * dlam / (lam * lam + r * r);
        }
        s.phi_prev = s.phi;
        traj.snapshots.push_back(std::move(s));
    }
    return traj;
}

std::optional<BlowupReport> analyze_blowup(const Trajectory& traj,
                                           double epsilon0, double epsilon1,
                                           const RadialGrid& comparison,
                                           double fit_r_lo, double fit_r_hi,
                                           std::size_t history) {
    auto cand = detect_blowup(traj, epsilon0, epsilon1, history);
    if (!cand) return std::nullopt;

    BlowupReport rep;
    rep.candidate = *cand;
    for (std::size_t i = 0; i < cand->times.size(); ++i) {
        auto profiles = rescale_profile(traj, cand->radii[i], cand->times[i], comparison);
        rep.h_sup_rescaled.push_back(profiles.second.max_abs());
        rep.fit = fit_harmonic_profile(profiles.first, fit_r_lo, fit_r_hi);
        rep.c_fits.push_back(rep.fit.c_fit);
        rep.rescaled_profiles.push_back(std::move(profiles));
    }
    return rep;
}

}  // namespace els
