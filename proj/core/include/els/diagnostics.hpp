#pragma once

#include <utility>
#include <vector>

#include "els/director.hpp"
#include "els/grid.hpp"

namespace els {

// ---------------------------------------------------------------------------
// Local energy
// ---------------------------------------------------------------------------

/// Local energy density e(r,t) = phi_r^2/2 + phi_t^2/2 + sin^2(phi)/(2r^2).
/// The axis value of the angular term is the L'Hopital limit phi_r(0)^2/2.
RadialField energy_density(const FieldState& state);

struct EnergyReport {
    double time;
    RadialField e_field;
    std::vector<std::pair<double, double>> E_of_R;  // (R, E(R,t)) table
    double total_welss;
    double total_wels;
};

EnergyReport energy_report(const FieldState& state);

/// E(R,t) = \int_0^R e r dr for one R.
double local_energy(const FieldState& state, double R);

/// The monitored dissipation functionals:
/// welss: (1/2)\int (phi_r^2 + phi_t^2 + sin^2 phi / r^2 + h_r^2 + h^2/r^2) r dr
/// wels:  (1/2)\int (v^2 + phi_r^2 + phi_t^2 + sin^2 phi / r^2) r dr
double welss_energy(const FieldState& state);
double wels_energy(const FieldState& state);

/// The unhalved threshold functional
/// \int (phi_r^2 + phi_t^2 + sin^2 phi / r^2 + h_r^2 + h^2/r^2) r dr,
/// whose small-data threshold is the harmonic-map energy 4.
double threshold_energy(const FieldState& state);

// ---------------------------------------------------------------------------
// Flux and cone quantities
// ---------------------------------------------------------------------------

struct FluxReport {
    double T;
    double tau;
    double flux_value;
    double integrand_min;  // pointwise min of e - phi_r phi_t along the cone
};

/// Flux(T, T-tau) = \int_{T-tau}^{T} [e - phi_r phi_t](T-t, t) (T-t) dt,
/// trapezoid over snapshot times, fields interpolated to r = T - t.
FluxReport flux(const Trajectory& traj, double T, double tau);

/// max(0, E(R,s) + Flux(s, s-tau) - E(R+tau, s-tau) - C_test*tau), R + s = T.
/// C_test < 0 requests the default: the run's measured sup of \int h_t^2 r dr.
double local_energy_monotonicity(const Trajectory& traj, double T, double s,
                                 double tau, double c_test = -1.0);

/// max over nodes of |H(phi)| - E(r,t) clipped below at zero, where
/// H(phi) = \int_0^phi |sin| (exact piecewise antiderivative).
double h_bound_check(const FieldState& state);

/// Exact \int_0^phi |sin tau| d tau (1 - cos on [0,pi], + 2 per half period).
double sine_total_variation(double phi);

struct ConeReport {
    // (t, lambda, annulus energy \int_{lambda(T-t)}^{T-t} e r dr)
    std::vector<std::tuple<double, double, double>> annulus_energies;
    // (tau, (1/tau) \iint_{K^T(tau)} phi_t^2 r dr dt)
    std::vector<std::pair<double, double>> phit_cone_avg;
};

ConeReport cone_reports(const Trajectory& traj, double T,
                        const std::vector<double>& lambdas,
                        const std::vector<double>& taus);

/// (max |h_r|, max |h_t|) over the trajectory, by discrete differences.
std::pair<double, double> sup_norms_h(const Trajectory& traj);

/// Max deviation of phi, v at r = 0 and r = r_max from their initial values.
double boundary_drift(const Trajectory& traj);

}  // namespace els
