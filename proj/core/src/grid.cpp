#include "els/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "els/errors.hpp"

namespace els {

RadialGrid::RadialGrid(double r_max, std::size_t n_cells)
    : r_max_(r_max), n_cells_(n_cells) {
    if (!(r_max > 0.0)) {
        throw ConfigError("RadialGrid: r_max must be positive");
    }
    if (n_cells < 8) {
        throw ConfigError("RadialGrid: n_cells must be at least 8");
    }
    dr_ = r_max_ / static_cast<double>(n_cells_);
}

double RadialGrid::quad_weight(std::size_t j) const {
    double w = node(j) * dr_;
    if (j == 0 || j == n_cells_) w *= 0.5;
    return w;
}

RadialField::RadialField(const RadialGrid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != g.n_nodes()) {
        throw ConfigError("RadialField: value count does not match grid");
    }
}

bool RadialField::all_finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](double x) { return std::isfinite(x); });
}

double RadialField::max_abs() const {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::abs(x));
    return m;
}

RadialField bessel_laplacian(const RadialField& f, AxisPolicy axis) {
    const RadialGrid& g = f.grid;
    const double dr = g.dr();
    const double inv_dr2 = 1.0 / (dr * dr);
    RadialField out(g);

    const std::size_t n = g.n_cells();
    for (std::size_t j = 1; j < n; ++j) {
        const double flux_hi = g.half_node(j) * (f[j + 1] - f[j]);
        const double flux_lo = g.half_node(j - 1) * (f[j] - f[j - 1]);
        out[j] = (flux_hi - flux_lo) * inv_dr2 / g.node(j);
    }
    out[0] = (axis == AxisPolicy::Neumann) ? 4.0 * (f[1] - f[0]) * inv_dr2 : 0.0;
    out[n] = 0.0;
    return out;
}

RadialField vector_laplacian(const RadialField& f) {
    if (std::abs(f[0]) > 1e-12) {
        throw ContractError("vector_laplacian: field must vanish on the axis");
    }
    RadialField out = bessel_laplacian(f, AxisPolicy::DirichletZero);
    const RadialGrid& g = f.grid;
    for (std::size_t j = 1; j < g.n_cells(); ++j) {
        const double r = g.node(j);
        out[j] -= f[j] / (r * r);
    }
    return out;
}

double interp(const RadialField& f, double r) {
    const RadialGrid& g = f.grid;
    if (r <= 0.0) return f[0];
    if (r >= g.r_max()) return f[g.n_cells()];
    const double x = r / g.dr();
    const std::size_t j = std::min(static_cast<std::size_t>(x), g.n_cells() - 1);
    const double s = x - static_cast<double>(j);
    return (1.0 - s) * f[j] + s * f[j + 1];
}

double integrate_radial(const RadialField& f, double r_lo, double r_hi) {
    const RadialGrid& g = f.grid;
    if (!(0.0 <= r_lo && r_lo < r_hi && r_hi <= g.r_max() + 1e-12 * g.r_max())) {
        throw RangeError("integrate_radial: bounds outside [0, r_max]");
    }
    r_hi = std::min(r_hi, g.r_max());

    const double dr = g.dr();
    const std::size_t j_lo = static_cast<std::size_t>(r_lo / dr);
    double total = 0.0;
    for (std::size_t j = j_lo; j < g.n_cells(); ++j) {
        const double a = std::max(r_lo, g.node(j));
        const double b = std::min(r_hi, g.node(j + 1));
        if (b <= a) {
            if (g.node(j) >= r_hi) break;
            continue;
        }
        // Interpolate the integrand f*r linearly between nodes so that the
        // trapezoid sum is the exact integral of a piecewise-linear function;
        // this makes the quadrature exactly additive over split points.
        auto g_at = [&](double r) {
            std::size_t k = std::min(static_cast<std::size_t>(r / dr), g.n_cells() - 1);
            const double w = (r - g.node(k)) / dr;
            const double g0 = f[k] * g.node(k);
            const double g1 = f[k + 1] * g.node(k + 1);
            return g0 + w * (g1 - g0);
        };
        total += 0.5 * (g_at(a) + g_at(b)) * (b - a);
    }
    return total;
}

double integrate_radial(const RadialField& f) {
    return integrate_radial(f, 0.0, f.grid.r_max());
}

RadialField radial_divergence(const RadialField& f) {
    // (1/r)(r f)_r rewritten as 2 psi + r psi_r with psi = f/r. The naive
    // central difference of (r f) loses an order at the first node after
    // the division by r ~ dr; differencing psi instead stays second order
    // uniformly (and is exact when psi is linear, e.g. f = r^2/3).
    const RadialGrid& g = f.grid;
    const double dr = g.dr();
    const std::size_t n = g.n_cells();
    std::vector<double> psi(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) psi[j] = f[j] / g.node(j);
    RadialField out(g);
    out[0] = 0.0;
    out[1] = 2.0 * psi[1] +
             g.node(1) * (-3.0 * psi[1] + 4.0 * psi[2] - psi[3]) / (2.0 * dr);
    for (std::size_t j = 2; j < n; ++j) {
        out[j] = 2.0 * psi[j] + g.node(j) * (psi[j + 1] - psi[j - 1]) / (2.0 * dr);
    }
    out[n] = 2.0 * psi[n] +
             g.node(n) * (3.0 * psi[n] - 4.0 * psi[n - 1] + psi[n - 2]) / (2.0 * dr);
    return out;
}

RadialField radial_derivative(const RadialField& f) {
    const RadialGrid& g = f.grid;
    const double dr = g.dr();
    const std::size_t n = g.n_cells();
    RadialField out(g);
    for (std::size_t j = 1; j < n; ++j) {
        out[j] = (f[j + 1] - f[j - 1]) / (2.0 * dr);
    }
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dr);
    out[n] = (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * dr);
    return out;
}

}  // namespace els
