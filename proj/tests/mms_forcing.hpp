#pragma once

// Manufactured solution phi(r,t) = sin(t) r exp(-r^2), v(r,t) = t r exp(-r)
// for the v_form system. The source terms below are the symbolic residuals
//
//   S_phi = phi_tt + 2 phi_t - [ (1/r)(r phi_r)_r - sin(2 phi)/(2 r^2) - v_r ]
//   S_v   = v_t - [ (1/r)(r v_r)_r + (1/r)(r phi_t)_r ]
//
// (computed with a CAS and transcribed). Both fields vanish at r = 0, where
// the solver pins the axis node, so the 1/r singularities are never hit.

#include <cmath>

#include "els/director.hpp"
#include "els/grid.hpp"

namespace mms {

inline double phi_exact(double r, double t) {
    return std::sin(t) * r * std::exp(-r * r);
}

inline double v_exact(double r, double t) { return t * r * std::exp(-r); }

inline double phi_source(double r, double t) {
    const double er2 = std::exp(-r * r);
    const double er = std::exp(-r);
    const double st = std::sin(t);
    const double ct = std::cos(t);
    return -4.0 * r * r * r * er2 * st - r * t * er + 7.0 * r * er2 * st +
           2.0 * r * er2 * ct + t * er - er2 * st / r +
           0.5 * std::sin(2.0 * r * er2 * st) / (r * r);
}

inline double v_source(double r, double t) {
    const double er2 = std::exp(-r * r);
    const double er = std::exp(-r);
    const double ct = std::cos(t);
    return 2.0 * r * r * er2 * ct - r * t * er + r * er + 3.0 * t * er -
           2.0 * er2 * ct - t * er / r;
}

inline els::Forcing make_forcing() {
    els::Forcing f;
    f.phi_source = [](double t, const els::RadialGrid& g) {
        els::RadialField out(g);
        for (std::size_t j = 1; j < g.n_nodes(); ++j) out[j] = phi_source(g.node(j), t);
        return out;
    };
    f.flow_source = [](double t, const els::RadialGrid& g) {
        els::RadialField out(g);
        for (std::size_t j = 1; j < g.n_nodes(); ++j) out[j] = v_source(g.node(j), t);
        return out;
    };
    return f;
}

inline els::TableProfile table_of(const els::RadialGrid& g, double (*f)(double, double),
                                  double t) {
    els::TableProfile p;
    p.values.resize(g.n_nodes());
    for (std::size_t j = 0; j < g.n_nodes(); ++j) p.values[j] = f(g.node(j), t);
    p.values[0] = 0.0;
    return p;
}

// phi_t(r, 0) = cos(0) r exp(-r^2) = r exp(-r^2)
inline double phi_t0(double r, double /*t*/) { return r * std::exp(-r * r); }

}  // namespace mms
