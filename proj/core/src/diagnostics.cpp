#include "els/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "els/errors.hpp"

namespace els {

namespace {

// Snapshot indices whose times fall in [t_lo, t_hi] (with slop).
std::vector<std::size_t> snaps_in(const Trajectory& traj, double t_lo, double t_hi) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const double t = traj.snapshots[i].time;
        if (t >= t_lo - 1e-9 && t <= t_hi + 1e-9) idx.push_back(i);
    }
    return idx;
}

}  // namespace

double sine_total_variation(double phi) {
    const double a = std::abs(phi);
    const double k = std::floor(a / M_PI);
    const double rem = a - k * M_PI;
    const double h = 2.0 * k + (1.0 - std::cos(rem));
    return phi >= 0.0 ? h : -h;
}

RadialField energy_density(const FieldState& state) {
    const RadialGrid& g = state.grid;
    const RadialField phi_r = radial_derivative(state.phi);
    RadialField e(g);
    for (std::size_t j = 1; j < g.n_nodes(); ++j) {
        const double r = g.node(j);
        const double s = std::sin(state.phi[j]);
        e[j] = 0.5 * phi_r[j] * phi_r[j] + 0.5 * state.phi_t[j] * state.phi_t[j] +
               0.5 * s * s / (r * r);
    }
    // L'Hopital at the axis: sin(phi) ~ phi ~ phi_r(0) r.
    e[0] = phi_r[0] * phi_r[0] + 0.5 * state.phi_t[0] * state.phi_t[0];
    return e;
}

double local_energy(const FieldState& state, double R) {
    if (R <= 0.0) return 0.0;
    return integrate_radial(energy_density(state), 0.0, R);
}

EnergyReport energy_report(const FieldState& state) {
    EnergyReport rep{state.time, energy_density(state), {}, 0.0, 0.0};
    const RadialGrid& g = state.grid;
    const double dr = g.dr();
    double cum = 0.0;
    rep.E_of_R.reserve(g.n_nodes());
    rep.E_of_R.emplace_back(0.0, 0.0);
    for (std::size_t j = 1; j < g.n_nodes(); ++j) {
        cum += 0.5 * (rep.e_field[j - 1] * g.node(j - 1) + rep.e_field[j] * g.node(j)) * dr;
        rep.E_of_R.emplace_back(g.node(j), cum);
    }
    rep.total_welss = welss_energy(state);
    rep.total_wels = wels_energy(state);
    return rep;
}

double welss_energy(const FieldState& state) {
    const RadialGrid& g = state.grid;
    const RadialField phi_r = radial_derivative(state.phi);
    const RadialField h_r = radial_derivative(state.h);
    double total = 0.0;
    for (std::size_t j = 1; j < g.n_nodes(); ++j) {
        const double r = g.node(j);
        const double s = std::sin(state.phi[j]);
        const double dens = phi_r[j] * phi_r[j] + state.phi_t[j] * state.phi_t[j] +
                            s * s / (r * r) + h_r[j] * h_r[j] +
                            state.h[j] * state.h[j] / (r * r);
        total += 0.5 * dens * g.quad_weight(j);
    }
    return total;
}

double threshold_energy(const FieldState& state) { return 2.0 * welss_energy(state); }

double wels_energy(const FieldState& state) {
    const RadialGrid& g = state.grid;
    const RadialField phi_r = radial_derivative(state.phi);
    double total = 0.0;
    for (std::size_t j = 1; j < g.n_nodes(); ++j) {
        const double r = g.node(j);
        const double s = std::sin(state.phi[j]);
        const double dens = state.v[j] * state.v[j] + phi_r[j] * phi_r[j] +
                            state.phi_t[j] * state.phi_t[j] + s * s / (r * r);
        total += 0.5 * dens * g.quad_weight(j);
    }
    return total;
}

FluxReport flux(const Trajectory& traj, double T, double tau) {
    if (T > traj.grid.r_max() + 1e-9) {
        throw RangeError("flux: cone apex radius T exceeds r_max");
    }
    const auto idx = snaps_in(traj, T - tau, T);
    if (idx.size() < 2) {
        throw ResolutionError("flux: need at least two snapshots in [T-tau, T]");
    }
    double integral = 0.0;
    double integrand_min = 0.0;
    double prev_t = 0.0, prev_val = 0.0;
    bool have_prev = false;
    for (std::size_t i : idx) {
        const FieldState& s = traj.snapshots[i];
        const double t = s.time;
        const double r = T - t;
        const RadialField e = energy_density(s);
        const RadialField phi_r = radial_derivative(s.phi);
        const double point =
            interp(e, r) - interp(phi_r, r) * interp(s.phi_t, r);
        integrand_min = std::min(integrand_min, point);
        const double val = point * r;
        if (have_prev) integral += 0.5 * (prev_val + val) * (t - prev_t);
        prev_t = t;
        prev_val = val;
        have_prev = true;
    }
    return FluxReport{T, tau, integral, integrand_min};
}

namespace {

const FieldState& snapshot_at(const Trajectory& traj, double t) {
    const FieldState* best = nullptr;
    double best_d = 0.0;
    for (const FieldState& s : traj.snapshots) {
        const double d = std::abs(s.time - t);
        if (!best || d < best_d) {
            best = &s;
            best_d = d;
        }
    }
    if (!best || best_d > 1e-6) {
        throw RangeError("no snapshot near requested time");
    }
    return *best;
}

double measured_ht_sq_sup(const Trajectory& traj) {
    double sup = 0.0;
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
        const FieldState& a = traj.snapshots[i - 1];
        const FieldState& b = traj.snapshots[i];
        const double dt = b.time - a.time;
        if (dt <= 0.0) continue;
        RadialField ht(traj.grid);
        for (std::size_t j = 0; j < traj.grid.n_nodes(); ++j) {
            ht[j] = (b.h[j] - a.h[j]) / dt;
            ht[j] *= ht[j];
        }
        sup = std::max(sup, integrate_radial(ht));
    }
    return sup;
}

}  // namespace

double local_energy_monotonicity(const Trajectory& traj, double T, double s,
                                 double tau, double c_test) {
    const double R = T - s;
    if (R <= 0.0 || tau <= 0.0 || tau > s + 1e-12 ||
        R + tau > traj.grid.r_max() + 1e-9) {
        throw RangeError("local_energy_monotonicity: cone geometry outside domain");
    }
    if (c_test < 0.0) c_test = measured_ht_sq_sup(traj);
    const double lhs = local_energy(snapshot_at(traj, s), R) + flux(traj, s, tau).flux_value;
    const double rhs =
        local_energy(snapshot_at(traj, s - tau), R + tau) + c_test * tau;
    return std::max(0.0, lhs - rhs);
}

double h_bound_check(const FieldState& state) {
    const EnergyReport rep = energy_report(state);
    double worst = 0.0;
    for (std::size_t j = 0; j < state.grid.n_nodes(); ++j) {
        const double H = std::abs(sine_total_variation(state.phi[j]));
        worst = std::max(worst, H - rep.E_of_R[j].second);
    }
    return std::max(0.0, worst);
}

ConeReport cone_reports(const Trajectory& traj, double T,
                        const std::vector<double>& lambdas,
                        const std::vector<double>& taus) {
    ConeReport rep;
    if (T > traj.grid.r_max() + 1e-9) {
        throw RangeError("cone_reports: cone apex outside domain");
    }

    double tau_min = T;
    for (double tau : taus) tau_min = std::min(tau_min, tau);
    double max_gap = 0.0;
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
        max_gap = std::max(max_gap,
                           traj.snapshots[i].time - traj.snapshots[i - 1].time);
    }
    if (!taus.empty() && max_gap > tau_min / 8.0 + 1e-12) {
        throw ResolutionError("cone_reports: snapshot spacing exceeds tau_min/8");
    }

    for (const FieldState& s : traj.snapshots) {
        const double t = s.time;
        if (t >= T) break;
        const double r_hi = T - t;
        if (r_hi > traj.grid.r_max()) continue;
        const RadialField e = energy_density(s);
        for (double lambda : lambdas) {
            const double r_lo = lambda * r_hi;
            rep.annulus_energies.emplace_back(
                t, lambda, integrate_radial(e, r_lo, r_hi));
        }
    }

    for (double tau : taus) {
        const auto idx = snaps_in(traj, T - tau, T);
        double integral = 0.0;
        double prev_t = 0.0, prev_val = 0.0;
        bool have_prev = false;
        for (std::size_t i : idx) {
            const FieldState& s = traj.snapshots[i];
            const double r_hi = T - s.time;
            double val = 0.0;
            if (r_hi > 0.0) {
                RadialField pt2(traj.grid);
                for (std::size_t j = 0; j < traj.grid.n_nodes(); ++j) {
                    pt2[j] = s.phi_t[j] * s.phi_t[j];
                }
                val = integrate_radial(pt2, 0.0, std::min(r_hi, traj.grid.r_max()));
            }
            if (have_prev) integral += 0.5 * (prev_val + val) * (s.time - prev_t);
            prev_t = s.time;
            prev_val = val;
            have_prev = true;
        }
        rep.phit_cone_avg.emplace_back(tau, integral / tau);
    }
    return rep;
}

std::pair<double, double> sup_norms_h(const Trajectory& traj) {
    double sup_hr = 0.0;
    for (const FieldState& s : traj.snapshots) {
        sup_hr = std::max(sup_hr, radial_derivative(s.h).max_abs());
    }
    double sup_ht = 0.0;
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
        const FieldState& a = traj.snapshots[i - 1];
        const FieldState& b = traj.snapshots[i];
        const double dt = b.time - a.time;
        if (dt <= 0.0) continue;
        for (std::size_t j = 0; j < traj.grid.n_nodes(); ++j) {
            sup_ht = std::max(sup_ht, std::abs(b.h[j] - a.h[j]) / dt);
        }
    }
    return {sup_hr, sup_ht};
}

double boundary_drift(const Trajectory& traj) {
    if (traj.snapshots.empty()) return 0.0;
    const FieldState& init = traj.snapshots.front();
    const std::size_t n = traj.grid.n_cells();
    double drift = 0.0;
    for (const FieldState& s : traj.snapshots) {
        drift = std::max({drift, std::abs(s.phi[0] - init.phi[0]),
                          std::abs(s.v[0] - init.v[0]),
                          std::abs(s.phi[n] - init.phi[n]),
                          std::abs(s.v[n] - init.v[n])});
    }
    return drift;
}

}  // namespace els
