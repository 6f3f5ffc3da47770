#include "els/director.hpp"

#include <algorithm>
#include <cmath>

#include "els/diagnostics.hpp"
#include "els/errors.hpp"
#include "els/tridiag.hpp"

namespace els {

namespace {

constexpr double kDivergenceCap = 1e8;

// Smooth cutoff: 1 on [0, cutoff], 0 beyond 2*cutoff, C^inf in between.
double smooth_cutoff(double r, double cutoff) {
    if (cutoff <= 0.0) return 1.0;
    if (r <= cutoff) return 1.0;
    if (r >= 2.0 * cutoff) return 0.0;
    const double x = (r - cutoff) / cutoff;  // in (0,1)
    const double qa = std::exp(-1.0 / (1.0 - x));
    const double qb = std::exp(-1.0 / x);
    return qa / (qa + qb);
}

double eval_profile(const Profile& p, double r) {
    return std::visit(
        [&](const auto& prof) -> double {
            using T = std::decay_t<decltype(prof)>;
            if constexpr (std::is_same_v<T, ZeroProfile>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, GaussianBump>) {
                const double x = (r - prof.center) / prof.width;
                return prof.amplitude * std::exp(-x * x);
            } else if constexpr (std::is_same_v<T, HarmonicCap>) {
                return 2.0 * std::atan(r / prof.c) * smooth_cutoff(r, prof.cutoff);
            } else {
                return 0.0;  // TableProfile handled in sample_profile
            }
        },
        p);
}

void check_divergence(const FieldState& s) {
    for (const RadialField* f : {&s.phi, &s.phi_t, &s.v, &s.h}) {
        if (!f->all_finite() || f->max_abs() > kDivergenceCap) {
            throw DivergenceError("field diverged", s.time);
        }
    }
}

// Damped leapfrog: (phi+ - 2 phi + phi-)/dt^2 + gamma (phi+ - phi-)/(2 dt)
//                  = L_bessel(phi) - sin(2 phi)/(2 r^2) + source.
// Linear in phi+; the axis node stays 0, the outer node stays pinned.
RadialField wave_step(const RadialField& phi, const RadialField& phi_prev,
                      double dt, double gamma, const RadialField& source) {
    const RadialGrid& g = phi.grid;
    const std::size_t n = g.n_cells();
    RadialField lap = bessel_laplacian(phi, AxisPolicy::DirichletZero);
    RadialField out(g);
    const double inv_dt2 = 1.0 / (dt * dt);
    const double half_gamma_dt = gamma / (2.0 * dt);
    const double denom = inv_dt2 + half_gamma_dt;
    for (std::size_t j = 1; j < n; ++j) {
        const double r = g.node(j);
        const double rhs = lap[j] - std::sin(2.0 * phi[j]) / (2.0 * r * r) + source[j] +
                           (2.0 * phi[j] - phi_prev[j]) * inv_dt2 +
                           half_gamma_dt * phi_prev[j];
        out[j] = rhs / denom;
    }
    out[0] = 0.0;
    out[n] = phi[n];
    return out;
}

// Backward Euler for u_t = L u + source, L the conservative radial operator
// with optional -1/r^2 term. u[0] = 0 and u[n] pinned (Dirichlet).
RadialField backward_euler_radial(const RadialField& u, double dt,
                                  const RadialField& source, bool vector_term) {
    const RadialGrid& g = u.grid;
    const std::size_t n = g.n_cells();
    const double dr = g.dr();
    const std::size_t m = n - 1;  // unknowns j = 1..n-1
    std::vector<double> lower(m), diag(m), upper(m), rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = k + 1;
        const double r = g.node(j);
        const double a = g.half_node(j - 1) / (r * dr * dr);
        const double c = g.half_node(j) / (r * dr * dr);
        double b = -(a + c);
        if (vector_term) b -= 1.0 / (r * r);
        lower[k] = -dt * a;
        diag[k] = 1.0 - dt * b;
        upper[k] = -dt * c;
        rhs[k] = u[j] + dt * source[j];
    }
    rhs[m - 1] += dt * (g.half_node(n - 1) / (g.node(n - 1) * dr * dr)) * u[n];
    std::vector<double> x = solve_tridiagonal(lower, diag, upper, rhs);
    RadialField out(g);
    out[0] = 0.0;
    for (std::size_t k = 0; k < m; ++k) out[k + 1] = x[k];
    out[n] = u[n];
    return out;
}

}  // namespace

RadialField sample_profile(const Profile& p, const RadialGrid& grid) {
    RadialField f(grid);
    if (const auto* table = std::get_if<TableProfile>(&p)) {
        if (table->values.size() != grid.n_nodes()) {
            throw ConfigError("table profile: node count does not match grid");
        }
        f.values = table->values;
    } else {
        for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
            f[j] = eval_profile(p, grid.node(j));
        }
    }
    f[0] = 0.0;
    if (!f.all_finite()) throw ConfigError("initial profile has non-finite values");
    return f;
}

RadialField h_from_v(const RadialField& v) {
    if (std::abs(v[0]) > 1e-12) {
        throw ContractError("h_from_v: v must vanish on the axis");
    }
    const RadialGrid& g = v.grid;
    const double dr = g.dr();
    const std::size_t n = g.n_cells();
    // Integrand of the cumulative integral \int_0^{r_j} v R dR.
    auto w = [&](std::size_t j) { return v[j] * g.node(j); };
    RadialField h(g);
    // Per-cell quadrature from the quadratic through three neighboring
    // nodes (open Newton-Cotes). Plain trapezoid is O(dr^3) per cell, which
    // the division by r ~ dr near the axis degrades to O(dr) in v_from_h
    // roundtrips; the quadratic rule keeps the composition O(dr^2).
    double cum = dr * (5.0 * w(0) + 8.0 * w(1) - w(2)) / 12.0;
    h[1] = cum / g.node(1);
    for (std::size_t j = 1; j < n; ++j) {
        cum += dr * (-w(j - 1) + 8.0 * w(j) + 5.0 * w(j + 1)) / 12.0;
        h[j + 1] = cum / g.node(j + 1);
    }
    return h;
}

RadialField v_from_h(const RadialField& h) {
    if (std::abs(h[0]) > 1e-12) {
        throw ContractError("v_from_h: h must vanish on the axis");
    }
    return radial_divergence(h);
}

FieldState init_state(const InitialDataSpec& spec, const RadialGrid& grid, double dt) {
    FieldState s(grid);
    s.phi = sample_profile(spec.phi0, grid);
    s.phi_t = sample_profile(spec.phi1, grid);
    s.v = sample_profile(spec.v0, grid);
    s.h = h_from_v(s.v);
    s.phi_prev = s.phi;
    for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
        s.phi_prev[j] = s.phi[j] - dt * s.phi_t[j];
    }
    s.time = 0.0;
    return s;
}

double support_radius(const InitialDataSpec& spec, const RadialGrid& grid) {
    const RadialField phi0 = sample_profile(spec.phi0, grid);
    const RadialField phi1 = sample_profile(spec.phi1, grid);
    const RadialField v0 = sample_profile(spec.v0, grid);
    double support = 0.0;
    for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
        if (std::abs(phi0[j]) > 1e-12 || std::abs(phi1[j]) > 1e-12 ||
            std::abs(v0[j]) > 1e-12) {
            support = grid.node(j);
        }
    }
    return support;
}

FieldState step(const FieldState& state, const SolverConfig& config) {
    const RadialGrid& g = state.grid;
    const double dt = config.dt;
    if (!(dt > 0.0) || dt > config.cfl_sigma * g.dr() + 1e-15) {
        throw ConfigError("step: dt violates the CFL bound dt <= cfl_sigma*dr");
    }

    FieldState next(g);
    next.time = state.time + dt;

    RadialField wave_source(g);
    double gamma = 0.0;

    switch (config.formulation) {
        case Formulation::VForm: {
            gamma = 2.0;
            // v_t = L_bessel(v) + (1/r)(r phi_t)_r; the second term is the
            // same operator as v_from_h since phi_t vanishes on the axis.
            RadialField src = v_from_h(state.phi_t);
            if (config.forcing) {
                const RadialField f = config.forcing->flow_source(next.time, g);
                for (std::size_t j = 0; j < g.n_nodes(); ++j) src[j] += f[j];
            }
            next.v = backward_euler_radial(state.v, dt, src, /*vector_term=*/false);
            const RadialField v_r = radial_derivative(next.v);
            for (std::size_t j = 0; j < g.n_nodes(); ++j) wave_source[j] = -v_r[j];
            break;
        }
        case Formulation::HForm: {
            gamma = 1.0;
            RadialField src = state.phi_t;
            if (config.forcing) {
                const RadialField f = config.forcing->flow_source(next.time, g);
                for (std::size_t j = 0; j < g.n_nodes(); ++j) src[j] += f[j];
            }
            next.h = backward_euler_radial(state.h, dt, src, /*vector_term=*/true);
            for (std::size_t j = 0; j < g.n_nodes(); ++j) {
                wave_source[j] = -(next.h[j] - state.h[j]) / dt;
            }
            break;
        }
        case Formulation::SigmaModel:
            gamma = 0.0;
            break;
    }

    if (config.forcing) {
        const RadialField f = config.forcing->phi_source(state.time, g);
        for (std::size_t j = 0; j < g.n_nodes(); ++j) wave_source[j] += f[j];
    }

    next.phi = wave_step(state.phi, state.phi_prev, dt, gamma, wave_source);
    next.phi_prev = state.phi;
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        next.phi_t[j] = (next.phi[j] - state.phi[j]) / dt;
    }

    if (config.formulation == Formulation::VForm) {
        next.h = h_from_v(next.v);
    } else if (config.formulation == Formulation::HForm) {
        next.v = v_from_h(next.h);
        // The derived v carries one-sided-stencil noise at the outer node;
        // the Dirichlet value must be preserved exactly.
        next.v[g.n_cells()] = state.v[g.n_cells()];
    } else {
        next.v = state.v;
        next.h = state.h;
    }

    check_divergence(next);
    return next;
}

Trajectory run(const SolverConfig& config, const RadialGrid& grid) {
    if (!(config.t_end > 0.0) || !(config.dt > 0.0)) {
        throw ConfigError("run: dt and t_end must be positive");
    }
    if (config.snapshot_every == 0) {
        throw ConfigError("run: snapshot_every must be positive");
    }
    if (config.enforce_cone_guard) {
        const double support = support_radius(config.initial_data, grid);
        if (config.t_end > 0.8 * grid.r_max() - support) {
            throw ConfigError(
                "run: wave cone of the initial data can reach r_max before "
                "t_end; enlarge the domain or disable the cone guard");
        }
    }

    Trajectory traj(grid);
    FieldState state = init_state(config.initial_data, grid, config.dt);
    traj.snapshots.push_back(state);

    const auto n_steps =
        static_cast<std::size_t>(std::llround(config.t_end / config.dt));
    double prev_welss = welss_energy(state);
    RadialField prev_h = state.h;

    for (std::size_t i = 1; i <= n_steps; ++i) {
        FieldState nxt(grid);
        try {
            nxt = step(state, config);
        } catch (const DivergenceError& e) {
            traj.diverged = true;
            traj.failure_time = e.time;
            return traj;
        }

        StepDiagnostics d{};
        d.time = nxt.time;
        d.energy_welss = welss_energy(nxt);
        d.energy_wels = wels_energy(nxt);
        d.dissipation_residual = std::max(0.0, d.energy_welss - prev_welss);
        const RadialField hr = radial_derivative(nxt.h);
        d.sup_hr = hr.max_abs();
        double sup_ht = 0.0;
        for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
            sup_ht = std::max(sup_ht, std::abs(nxt.h[j] - prev_h[j]) / config.dt);
        }
        d.sup_ht = sup_ht;
        traj.diagnostics.push_back(d);

        prev_welss = d.energy_welss;
        prev_h = nxt.h;
        state = std::move(nxt);

        if (i % config.snapshot_every == 0 || i == n_steps) {
            traj.snapshots.push_back(state);
        }
    }
    return traj;
}

}  // namespace els
