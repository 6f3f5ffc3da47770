#include "els/gl.hpp"

#include <algorithm>
#include <cmath>

#include "els/errors.hpp"
#include "els/tridiag.hpp"

namespace els {

namespace {

constexpr double kDivergenceCap = 1e8;

// Backward Euler for v_t = (1/2) L_bessel(v) + src. v[0] = 0, v[n] pinned.
RadialField gl_v_update(const RadialField& v, double dt, const RadialField& src) {
    const RadialGrid& g = v.grid;
    const std::size_t n = g.n_cells();
    const double dr = g.dr();
    const std::size_t m = n - 1;
    std::vector<double> lower(m), diag(m), upper(m), rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = k + 1;
        const double r = g.node(j);
        const double a = 0.5 * g.half_node(j - 1) / (r * dr * dr);
        const double c = 0.5 * g.half_node(j) / (r * dr * dr);
        lower[k] = -dt * a;
        diag[k] = 1.0 + dt * (a + c);
        upper[k] = -dt * c;
        rhs[k] = v[j] + dt * src[j];
    }
    rhs[m - 1] += dt * 0.5 * (g.half_node(n - 1) / (g.node(n - 1) * dr * dr)) * v[n];
    std::vector<double> x = solve_tridiagonal(lower, diag, upper, rhs);
    RadialField out(g);
    out[0] = 0.0;
    for (std::size_t k = 0; k < m; ++k) out[k + 1] = x[k];
    out[n] = v[n];
    return out;
}

}  // namespace

GLState gl_init(const InitialDataSpec& spec, double epsilon,
                const RadialGrid& grid, double dt) {
    if (!(epsilon > 0.0)) throw ConfigError("gl_init: epsilon must be positive");
    GLState s(grid, epsilon);
    const RadialField phi0 = sample_profile(spec.phi0, grid);
    const RadialField phi1 = sample_profile(spec.phi1, grid);
    s.v = sample_profile(spec.v0, grid);
    for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
        s.u[j] = std::sin(phi0[j]);
        s.w[j] = std::cos(phi0[j]);
        s.u_t[j] = std::cos(phi0[j]) * phi1[j];
        s.w_t[j] = -std::sin(phi0[j]) * phi1[j];
        s.u_prev[j] = s.u[j] - dt * s.u_t[j];
        s.w_prev[j] = s.w[j] - dt * s.w_t[j];
    }
    s.time = 0.0;
    return s;
}

GLState gl_step(const GLState& state, double dt, double cfl_sigma) {
    const RadialGrid& g = state.grid;
    const std::size_t n = g.n_cells();
    if (!(dt > 0.0) || dt > cfl_sigma * g.dr() + 1e-15 ||
        dt > 0.5 * state.epsilon + 1e-15) {
        throw ConfigError("gl_step: dt violates min(cfl_sigma*dr, 0.5*epsilon)");
    }

    GLState next(g, state.epsilon);
    next.time = state.time + dt;

    // Parabolic step for v, explicit radial flux F.
    RadialField flux(g);
    const RadialField v_r_old = radial_derivative(state.v);
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        flux[j] = (state.w[j] * state.u_t[j] - state.u[j] * state.w_t[j]) +
                  0.5 * (state.u[j] * state.u[j] + state.w[j] * state.w[j]) * v_r_old[j];
    }
    next.v = gl_v_update(state.v, dt, radial_divergence(flux));
    const RadialField v_r = radial_derivative(next.v);

    // Damped leapfrog on (u, w); penalty and rotation coupling explicit.
    const RadialField lap_u = vector_laplacian(state.u);
    const RadialField lap_w = bessel_laplacian(state.w, AxisPolicy::Neumann);
    const double inv_dt2 = 1.0 / (dt * dt);
    const double half_gamma_dt = 1.0 / dt;  // damping coefficient 2
    const double denom = inv_dt2 + half_gamma_dt;
    const double inv_eps2 = 1.0 / (state.epsilon * state.epsilon);

    for (std::size_t j = 0; j <= n; ++j) {
        const double pen = (state.u[j] * state.u[j] + state.w[j] * state.w[j] - 1.0) * inv_eps2;
        const double rhs_u = lap_u[j] - pen * state.u[j] - v_r[j] * state.w[j];
        const double rhs_w = lap_w[j] - pen * state.w[j] + v_r[j] * state.u[j];
        next.u[j] = (rhs_u + (2.0 * state.u[j] - state.u_prev[j]) * inv_dt2 +
                     half_gamma_dt * state.u_prev[j]) / denom;
        next.w[j] = (rhs_w + (2.0 * state.w[j] - state.w_prev[j]) * inv_dt2 +
                     half_gamma_dt * state.w_prev[j]) / denom;
    }
    // Axis: u pinned by regularity; outer boundary Dirichlet at initial values.
    next.u[0] = 0.0;
    next.u[n] = state.u[n];
    next.w[n] = state.w[n];

    next.u_prev = state.u;
    next.w_prev = state.w;
    for (std::size_t j = 0; j <= n; ++j) {
        next.u_t[j] = (next.u[j] - state.u[j]) / dt;
        next.w_t[j] = (next.w[j] - state.w[j]) / dt;
    }

    for (const RadialField* f : {&next.u, &next.w, &next.v}) {
        if (!f->all_finite() || f->max_abs() > kDivergenceCap) {
            throw DivergenceError("GL field diverged", next.time);
        }
    }
    return next;
}

GLEnergy gl_energy(const GLState& state) {
    const RadialGrid& g = state.grid;
    const RadialField u_r = radial_derivative(state.u);
    const RadialField w_r = radial_derivative(state.w);
    const double inv_eps2 = 1.0 / (state.epsilon * state.epsilon);
    GLEnergy e{0.0, 0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        const double wq = g.quad_weight(j);
        const double r = g.node(j);
        e.kinetic += 0.5 * (state.u_t[j] * state.u_t[j] + state.w_t[j] * state.w_t[j]) * wq;
        double angular = (j == 0) ? u_r[0] * u_r[0]
                                  : state.u[j] * state.u[j] / (r * r);
        e.elastic += 0.5 * (u_r[j] * u_r[j] + w_r[j] * w_r[j] + angular) * wq;
        const double c = state.u[j] * state.u[j] + state.w[j] * state.w[j] - 1.0;
        e.penalty += 0.25 * c * c * inv_eps2 * wq;
        e.fluid += 0.5 * state.v[j] * state.v[j] * wq;
    }
    e.total = e.kinetic + e.elastic + e.penalty + e.fluid;
    return e;
}

GLTrajectory gl_run(const GLConfig& config, const RadialGrid& grid) {
    if (!(config.t_end > 0.0) || !(config.dt > 0.0)) {
        throw ConfigError("gl_run: dt and t_end must be positive");
    }
    GLTrajectory traj(grid);
    GLState state = gl_init(config.initial_data, config.epsilon, grid, config.dt);
    traj.snapshots.push_back(state);

    const auto n_steps =
        static_cast<std::size_t>(std::llround(config.t_end / config.dt));
    for (std::size_t i = 1; i <= n_steps; ++i) {
        try {
            state = gl_step(state, config.dt, config.cfl_sigma);
        } catch (const DivergenceError& e) {
            traj.diverged = true;
            traj.failure_time = e.time;
            return traj;
        }
        traj.energies.emplace_back(state.time, gl_energy(state));
        if (i % config.snapshot_every == 0 || i == n_steps) {
            traj.snapshots.push_back(state);
        }
    }
    return traj;
}

double consistency_vs_director(const GLTrajectory& gl, const Trajectory& dir,
                               std::size_t* n_excluded) {
    if (!(gl.grid == dir.grid)) {
        throw ComparisonError("consistency_vs_director: grids differ");
    }
    const RadialGrid& g = gl.grid;
    std::size_t excluded = 0;
    double worst = -1.0;
    for (const GLState& gs : gl.snapshots) {
        const FieldState* match = nullptr;
        for (const FieldState& ds : dir.snapshots) {
            if (std::abs(ds.time - gs.time) < 1e-9) {
                match = &ds;
                break;
            }
        }
        if (!match) continue;
        double sq = 0.0;
        for (std::size_t j = 0; j < g.n_nodes(); ++j) {
            if (gs.u[j] == 0.0 && gs.w[j] == 0.0) {
                ++excluded;
                continue;
            }
            const double angle = std::atan2(gs.u[j], gs.w[j]);
            const double d = angle - match->phi[j];
            sq += d * d * g.quad_weight(j);
        }
        worst = std::max(worst, std::sqrt(sq));
    }
    if (worst < 0.0) {
        throw ComparisonError("consistency_vs_director: no shared snapshot times");
    }
    if (n_excluded) *n_excluded = excluded;
    return worst;
}

}  // namespace els
