#include <doctest.h>

#include <cmath>
#include <numbers>

#include "els/diagnostics.hpp"
#include "els/director.hpp"
#include "els/errors.hpp"
#include "els/grid.hpp"
#include "mms_forcing.hpp"

using namespace els;

namespace {

RadialField from_fn(const RadialGrid& g, double (*f)(double)) {
    RadialField out(g);
    for (std::size_t j = 0; j < g.n_nodes(); ++j) out[j] = f(g.node(j));
    out[0] = 0.0;
    return out;
}

double max_err(const RadialField& a, const RadialField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.grid.n_nodes(); ++j) {
        m = std::max(m, std::abs(a[j] - b[j]));
    }
    return m;
}

double l2_err(const RadialField& a, double (*exact)(double, double), double t) {
    const RadialGrid& g = a.grid;
    double s = 0.0;
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        const double d = a[j] - exact(g.node(j), t);
        s += d * d * g.quad_weight(j);
    }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("sample_profile basics") {
    RadialGrid g(20.0, 2000);
    RadialField z = sample_profile(ZeroProfile{}, g);
    CHECK(z.max_abs() == 0.0);

    RadialField cap = sample_profile(HarmonicCap{1.0, 5.0}, g);
    CHECK(cap[100] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));  // r = 1
    CHECK(cap[g.n_cells()] == 0.0);  // beyond 2*cutoff

    TableProfile bad;
    bad.values.assign(10, 0.0);
    CHECK_THROWS_AS(sample_profile(Profile{bad}, g), ConfigError);
}

TEST_CASE("h_from_v closed forms") {
    SUBCASE("zero") {
        RadialGrid g(2.0, 64);
        RadialField v(g);
        CHECK(h_from_v(v).max_abs() == 0.0);
    }
    SUBCASE("v = r gives h = r^2/3") {
        double prev = -1.0;
        for (std::size_t n : {100, 200}) {
            RadialGrid g(2.0, n);
            RadialField v = from_fn(g, +[](double r) { return r; });
            RadialField h = h_from_v(v);
            RadialField hx = from_fn(g, +[](double r) { return r * r / 3.0; });
            // v R is quadratic: the cell rule integrates it exactly.
            const double err = max_err(h, hx);
            CHECK(err < 1e-12);
            (void)prev;
        }
    }
    SUBCASE("v = 2r/(1+r^2) gives h = (2r - 2 arctan r)/r") {
        double prev = -1.0;
        for (std::size_t n : {100, 200}) {
            RadialGrid g(2.0, n);
            RadialField v = from_fn(g, +[](double r) { return 2.0 * r / (1.0 + r * r); });
            RadialField h = h_from_v(v);
            RadialField hx =
                from_fn(g, +[](double r) { return (2.0 * r - 2.0 * std::atan(r)) / r; });
            const double err = max_err(h, hx);
            CHECK(err < 2.0 * g.dr() * g.dr());
            if (prev > 0.0) CHECK(prev / err >= 3.6);
            prev = err;
        }
    }
}

TEST_CASE("v_from_h closed form and roundtrip") {
    RadialGrid g(2.0, 200);
    RadialField h = from_fn(g, +[](double r) { return r * r / 3.0; });
    RadialField v = v_from_h(h);
    RadialField vx = from_fn(g, +[](double r) { return r; });
    // Central difference of r^3/3 carries a dr^2/(3r) truncation term.
    for (std::size_t j = 1; j < g.n_nodes(); ++j) {
        const double tol = g.dr() * g.dr() / g.node(j) + 1e-12;
        CHECK(std::abs(v[j] - vx[j]) <= tol);
    }

    RadialField v0 = from_fn(g, +[](double r) { return r * std::exp(-r * r); });
    RadialField rt = v_from_h(h_from_v(v0));
    double err = 0.0;
    for (std::size_t j = 1; j < g.n_cells(); ++j) {
        err = std::max(err, std::abs(rt[j] - v0[j]));
    }
    CHECK(err < 3.0 * g.dr() * g.dr());
}

TEST_CASE("h/v roundtrip spatial order >= 1.9 across dr in {0.04, 0.02, 0.01}") {
    double prev = -1.0;
    for (std::size_t n : {500, 1000, 2000}) {  // r_max = 20
        RadialGrid g(20.0, n);
        RadialField v0 = from_fn(g, +[](double r) { return r * std::exp(-r * r); });
        RadialField rt = v_from_h(h_from_v(v0));
        double err = 0.0;
        for (std::size_t j = 1; j < g.n_cells(); ++j) {
            err = std::max(err, std::abs(rt[j] - v0[j]));
        }
        if (prev > 0.0) {
            const double order = std::log2(prev / err);
            CHECK(order >= 1.9);
        }
        prev = err;
    }
}

TEST_CASE("init_state") {
    RadialGrid g(20.0, 2000);
    SUBCASE("zero spec") {
        FieldState s = init_state(InitialDataSpec{}, g, 0.0025);
        CHECK(s.phi.max_abs() == 0.0);
        CHECK(s.v.max_abs() == 0.0);
        CHECK(s.h.max_abs() == 0.0);
        CHECK(s.time == 0.0);
    }
    SUBCASE("harmonic cap hits pi/2 at r = 1") {
        InitialDataSpec spec;
        spec.phi0 = HarmonicCap{1.0, 5.0};
        FieldState s = init_state(spec, g, 0.0025);
        CHECK(s.phi[100] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    }
    SUBCASE("gaussian bump has finite positive welss energy") {
        InitialDataSpec spec;
        spec.phi0 = GaussianBump{0.5, 2.0, 0.5};
        FieldState s = init_state(spec, g, 0.0025);
        const double e = welss_energy(s);
        CHECK(std::isfinite(e));
        CHECK(e > 0.0);
    }
}

TEST_CASE("step: zero state is a fixed point in every formulation") {
    RadialGrid g(5.0, 200);
    for (auto form : {Formulation::VForm, Formulation::HForm, Formulation::SigmaModel}) {
        SolverConfig cfg;
        cfg.formulation = form;
        cfg.dt = 0.01;
        cfg.t_end = 0.01;
        FieldState s = init_state(InitialDataSpec{}, g, cfg.dt);
        FieldState s1 = step(s, cfg);
        CHECK(s1.phi.max_abs() == 0.0);
        CHECK(s1.v.max_abs() == 0.0);
        CHECK(s1.h.max_abs() == 0.0);
        CHECK(s1.time == doctest::Approx(0.01));
    }
}

TEST_CASE("step: CFL violation is a configuration error") {
    RadialGrid g(5.0, 200);  // dr = 0.025
    SolverConfig cfg;
    cfg.dt = 0.1;  // > 0.5 * dr
    cfg.t_end = 0.1;
    FieldState s = init_state(InitialDataSpec{}, g, cfg.dt);
    CHECK_THROWS_AS(step(s, cfg), ConfigError);
}

TEST_CASE("static harmonic map barely drifts over one step") {
    RadialGrid g(20.0, 2000);
    SolverConfig cfg;
    cfg.formulation = Formulation::VForm;
    cfg.dt = 0.0025;
    cfg.t_end = cfg.dt;
    cfg.initial_data.phi0 = HarmonicCap{1.0, 0.0};  // uncut
    FieldState s = init_state(cfg.initial_data, g, cfg.dt);
    FieldState s1 = step(s, cfg);
    const double drift = max_err(s1.phi, s.phi);
    CHECK(drift <= g.dr() * g.dr() * cfg.dt);
}

TEST_CASE("run: zero data stays zero; snapshots bracket the run") {
    RadialGrid g(5.0, 200);
    SolverConfig cfg;
    cfg.formulation = Formulation::HForm;
    cfg.dt = 0.01;
    cfg.t_end = 0.5;
    cfg.snapshot_every = 10;
    Trajectory traj = run(cfg, g);
    CHECK(!traj.diverged);
    REQUIRE(!traj.snapshots.empty());
    CHECK(traj.snapshots.front().time == 0.0);
    CHECK(traj.snapshots.back().time == doctest::Approx(0.5));
    for (const auto& s : traj.snapshots) CHECK(s.phi.max_abs() == 0.0);
}

TEST_CASE("run: cone guard rejects long runs with wide data") {
    RadialGrid g(5.0, 200);
    SolverConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 4.5;  // 0.8 * r_max = 4, minus support
    cfg.initial_data.phi0 = GaussianBump{0.5, 2.0, 0.5};
    CHECK_THROWS_AS(run(cfg, g), ConfigError);
}

TEST_CASE("run: bump welss energy non-increasing within the step slack") {
    RadialGrid g(20.0, 2000);
    SolverConfig cfg;
    cfg.dt = 0.0025;
    cfg.t_end = 0.25;
    cfg.initial_data.phi0 = GaussianBump{0.5, 2.0, 0.5};
    const double slack = 1e-8 + 10.0 * cfg.dt * g.dr() * g.dr();
    for (auto form : {Formulation::VForm, Formulation::HForm}) {
        cfg.formulation = form;
        Trajectory traj = run(cfg, g);
        REQUIRE(!traj.diverged);
        for (const auto& d : traj.diagnostics) {
            CHECK(d.dissipation_residual <= slack);
        }
    }
}

TEST_CASE("run: h_form and v_form agree in L2 on bump data") {
    RadialGrid g(20.0, 2000);
    SolverConfig cfg;
    cfg.dt = 0.0025;
    cfg.t_end = 0.5;
    cfg.initial_data.phi0 = GaussianBump{0.5, 2.0, 0.5};
    cfg.formulation = Formulation::VForm;
    Trajectory tv = run(cfg, g);
    cfg.formulation = Formulation::HForm;
    Trajectory th = run(cfg, g);
    REQUIRE(tv.snapshots.size() == th.snapshots.size());
    const double tol = 5.0 * (cfg.dt + g.dr() * g.dr());
    double worst = 0.0;
    for (std::size_t k = 0; k < tv.snapshots.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < g.n_nodes(); ++j) {
            const double d = tv.snapshots[k].phi[j] - th.snapshots[k].phi[j];
            s += d * d * g.quad_weight(j);
        }
        worst = std::max(worst, std::sqrt(s));
    }
    CHECK(worst <= tol);
}

TEST_CASE("manufactured solution: spatial convergence order >= 1.9") {
    const double t_end = 0.1;
    double prev_phi = -1.0, prev_v = -1.0;
    for (std::size_t n : {400, 800, 1600}) {  // r_max = 16: dr in {.04,.02,.01}
        RadialGrid g(16.0, n);
        SolverConfig cfg;
        cfg.formulation = Formulation::VForm;
        cfg.dt = 0.25 * g.dr() * g.dr();  // O(dt) time error scales as dr^2
        cfg.t_end = t_end;
        cfg.forcing = mms::make_forcing();
        cfg.initial_data.phi0 = mms::table_of(g, mms::phi_exact, 0.0);
        cfg.initial_data.phi1 = mms::table_of(g, mms::phi_t0, 0.0);
        cfg.initial_data.v0 = mms::table_of(g, mms::v_exact, 0.0);
        cfg.enforce_cone_guard = false;  // forcing keeps the solution compact
        Trajectory traj = run(cfg, g);
        REQUIRE(!traj.diverged);
        const FieldState& fin = traj.snapshots.back();
        REQUIRE(fin.time == doctest::Approx(t_end).epsilon(1e-10));
        const double err_phi = l2_err(fin.phi, mms::phi_exact, t_end);
        const double err_v = l2_err(fin.v, mms::v_exact, t_end);
        if (prev_phi > 0.0) {
            CHECK(std::log2(prev_phi / err_phi) >= 1.9);
            CHECK(std::log2(prev_v / err_v) >= 1.9);
        }
        prev_phi = err_phi;
        prev_v = err_v;
    }
}

TEST_CASE("sigma model conserves energy far better than the damped system") {
    RadialGrid g(20.0, 2000);
    SolverConfig cfg;
    cfg.formulation = Formulation::SigmaModel;
    cfg.dt = 0.0025;
    cfg.t_end = 0.5;
    cfg.initial_data.phi0 = GaussianBump{0.5, 2.0, 0.5};
    Trajectory traj = run(cfg, g);
    REQUIRE(!traj.diverged);
    const double e0 = traj.diagnostics.front().energy_wels;
    const double e1 = traj.diagnostics.back().energy_wels;
    CHECK(std::abs(e1 - e0) / e0 < 0.02);
}
