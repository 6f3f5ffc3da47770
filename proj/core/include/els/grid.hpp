#pragma once

#include <cstddef>
#include <vector>

namespace els {

/// Uniform radial mesh on [0, r_max] with nodes r_j = j*dr.
///
/// All energy integrals in this project live in the measure r dr; the
/// quadrature weights below are the trapezoid weights of that measure
/// (r_j*dr at interior nodes, halved at both endpoints).
class RadialGrid {
public:
    RadialGrid(double r_max, std::size_t n_cells);

    double r_max() const { return r_max_; }
    std::size_t n_cells() const { return n_cells_; }
    std::size_t n_nodes() const { return n_cells_ + 1; }
    double dr() const { return dr_; }

    double node(std::size_t j) const { return static_cast<double>(j) * dr_; }
    double half_node(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dr_; }
    double quad_weight(std::size_t j) const;

    bool operator==(const RadialGrid& o) const {
        return r_max_ == o.r_max_ && n_cells_ == o.n_cells_;
    }

private:
    double r_max_;
    std::size_t n_cells_;
    double dr_;
};

/// One real value per grid node. Small value type, freely copied.
struct RadialField {
    RadialGrid grid;
    std::vector<double> values;

    explicit RadialField(const RadialGrid& g) : grid(g), values(g.n_nodes(), 0.0) {}
    RadialField(const RadialGrid& g, std::vector<double> v);

    double& operator[](std::size_t j) { return values[j]; }
    double operator[](std::size_t j) const { return values[j]; }
    std::size_t size() const { return values.size(); }

    bool all_finite() const;
    double max_abs() const;
};

enum class AxisPolicy { DirichletZero, Neumann };

/// (1/r)(r f_r)_r in conservative (flux) form.
///
/// Interior: [r_{j+1/2}(f_{j+1}-f_j) - r_{j-1/2}(f_j-f_{j-1})] / (r_j dr^2).
/// Axis node: 0 for DirichletZero (value pinned), 4(f_1-f_0)/dr^2 for
/// Neumann (the 2-D limit of the radial Laplacian at r=0).
/// Outer node: 0 (value pinned by the Dirichlet boundary).
RadialField bessel_laplacian(const RadialField& f, AxisPolicy axis);

/// (1/r)(r f_r)_r - f/r^2, for fields vanishing on the axis.
/// Throws ContractError when |f(0)| > 1e-12.
RadialField vector_laplacian(const RadialField& f);

/// Trapezoid rule for \int f r dr over [r_lo, r_hi]; partial cells use
/// linear interpolation of f. Additive over adjacent intervals.
double integrate_radial(const RadialField& f, double r_lo, double r_hi);

/// Full-domain shorthand.
double integrate_radial(const RadialField& f);

/// Linear interpolation of nodal values at radius r (clamped to the domain).
double interp(const RadialField& f, double r);

/// d/dr: central differences at interior nodes, second-order one-sided
/// at both endpoints.
RadialField radial_derivative(const RadialField& f);

/// (1/r)(r F)_r = F_r + F/r at interior nodes via central differences of
/// r*F; zero at the axis node (pinned), one-sided at the outer node.
RadialField radial_divergence(const RadialField& f);

}  // namespace els
