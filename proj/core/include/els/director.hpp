#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "els/grid.hpp"

namespace els {

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

/// One radial profile. Each of (phi0, phi1, v0) picks its own.
struct ZeroProfile {};

struct GaussianBump {
    double amplitude;  // radians (or velocity units for phi1/v0)
    double center;
    double width;
};

/// 2*arctan(r/c) * chi(r), chi a smooth cutoff: 1 on [0, cutoff], 0 beyond
/// 2*cutoff. cutoff <= 0 means no cutoff (the uncut harmonic map).
struct HarmonicCap {
    double c;
    double cutoff;
};

struct TableProfile {
    std::vector<double> values;  // one per grid node
};

using Profile = std::variant<ZeroProfile, GaussianBump, HarmonicCap, TableProfile>;

struct InitialDataSpec {
    Profile phi0 = ZeroProfile{};
    Profile phi1 = ZeroProfile{};
    Profile v0 = ZeroProfile{};
};

/// Sample a profile onto a grid. The axis node is pinned to zero.
RadialField sample_profile(const Profile& p, const RadialGrid& grid);

// ---------------------------------------------------------------------------
// Solver state and configuration
// ---------------------------------------------------------------------------

enum class Formulation { VForm, HForm, SigmaModel };

struct FieldState {
    RadialGrid grid;
    RadialField phi;
    RadialField phi_t;
    RadialField v;
    RadialField h;
    RadialField phi_prev;  // previous-step angle, for the leapfrog stepper
    double time = 0.0;

    explicit FieldState(const RadialGrid& g)
        : grid(g), phi(g), phi_t(g), v(g), h(g), phi_prev(g) {}
};

/// Manufactured-solution sources, evaluated at the time of the step's
/// right side. phi_source feeds the wave equation, flow_source the
/// parabolic equation (v in v_form, h in h_form).
struct Forcing {
    std::function<RadialField(double t, const RadialGrid&)> phi_source;
    std::function<RadialField(double t, const RadialGrid&)> flow_source;
};

struct SolverConfig {
    Formulation formulation = Formulation::HForm;
    double dt = 0.0;
    double t_end = 0.0;
    double cfl_sigma = 0.5;
    InitialDataSpec initial_data;
    std::optional<Forcing> forcing;
    std::size_t snapshot_every = 10;
    /// run() refuses configurations whose wave cone can touch r_max
    /// (t_end > 0.8*r_max - support radius). Static or boundary-supported
    /// data (e.g. the uncut harmonic map) may switch the guard off.
    bool enforce_cone_guard = true;
};

struct StepDiagnostics {
    double time;
    double energy_welss;          // (phi, h)-form dissipation functional
    double energy_wels;           // (phi, v)-form dissipation functional
    double dissipation_residual;  // max(0, energy_welss increase this step)
    double sup_hr;
    double sup_ht;
};

struct Trajectory {
    RadialGrid grid;
    std::vector<FieldState> snapshots;
    std::vector<StepDiagnostics> diagnostics;
    bool diverged = false;
    double failure_time = 0.0;
    bool synthetic = false;

    explicit Trajectory(const RadialGrid& g) : grid(g) {}
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// h(r) = (1/r) \int_0^r v R dR, cumulative trapezoid; h(0) = 0.
RadialField h_from_v(const RadialField& v);

/// v = (1/r)(r h)_r, central differences; v(0) = 0.
RadialField v_from_h(const RadialField& h);

/// Populated state at t = 0: h = h_from_v(v0), phi_prev = phi - dt*phi_t
/// (first-order leapfrog cold start; pass the dt the run will use).
FieldState init_state(const InitialDataSpec& spec, const RadialGrid& grid, double dt);

/// Advance one step in the configured formulation. Parabolic solve first
/// (backward Euler, tridiagonal), then the damped leapfrog wave step.
FieldState step(const FieldState& state, const SolverConfig& config);

/// Integrate to t_end, snapshotting every snapshot_every steps (the initial
/// and final states are always included). On divergence the partial
/// trajectory is returned with diverged = true.
Trajectory run(const SolverConfig& config, const RadialGrid& grid);

/// Largest radius where the initial data is nonzero (cone-guard input).
double support_radius(const InitialDataSpec& spec, const RadialGrid& grid);

}  // namespace els
