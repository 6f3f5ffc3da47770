#pragma once

#include <cstddef>
#include <vector>

#include "els/director.hpp"
#include "els/grid.hpp"

namespace els {

/// The Ginzburg-Landau relaxation of the director system, reduced to
/// radial form under the axisymmetric-without-swirl ansatz
/// d = (u cos theta, u sin theta, w). u is the in-plane amplitude
/// (= sin phi when |d| = 1), w the axial component (= cos phi).
struct GLState {
    RadialGrid grid;
    RadialField u, w, u_t, w_t, v;
    RadialField u_prev, w_prev;
    double epsilon;
    double time = 0.0;

    GLState(const RadialGrid& g, double eps)
        : grid(g), u(g), w(g), u_t(g), w_t(g), v(g), u_prev(g), w_prev(g),
          epsilon(eps) {}
};

struct GLEnergy {
    double kinetic;
    double elastic;
    double penalty;
    double fluid;
    double total;
};

struct GLConfig {
    double epsilon;
    double dt;
    double t_end;
    double cfl_sigma = 0.5;
    InitialDataSpec initial_data;
    std::size_t snapshot_every = 10;
};

struct GLTrajectory {
    RadialGrid grid;
    std::vector<GLState> snapshots;
    std::vector<std::pair<double, GLEnergy>> energies;  // per step
    bool diverged = false;
    double failure_time = 0.0;

    explicit GLTrajectory(const RadialGrid& g) : grid(g) {}
};

/// Constrained initial data from angle specs: u = sin phi0, w = cos phi0,
/// u_t = cos(phi0) phi1, w_t = -sin(phi0) phi1, v = v0. dt seeds the
/// leapfrog history (first-order Taylor step, as in the director solver).
GLState gl_init(const InitialDataSpec& spec, double epsilon,
                const RadialGrid& grid, double dt);

/// One step: backward Euler on v_t = (1/2) L_bessel(v) + (1/r)(r F)_r
/// with explicit F = (w u_t - u w_t) + (1/2)(u^2+w^2) v_r, then damped
/// leapfrog on (u, w) with the explicit penalty (|d|^2-1)/eps^2.
GLState gl_step(const GLState& state, double dt, double cfl_sigma = 0.5);

GLEnergy gl_energy(const GLState& state);

GLTrajectory gl_run(const GLConfig& config, const RadialGrid& grid);

/// Max over shared snapshot times of the L^2(r dr) distance between
/// atan2(u, w) and the director run's phi. Nodes with u = w = 0 are
/// excluded (angle undefined); their count is reported via n_excluded.
double consistency_vs_director(const GLTrajectory& gl, const Trajectory& dir,
                               std::size_t* n_excluded = nullptr);

}  // namespace els
