// els — radial Ericksen–Leslie solver CLI.
//
// Subcommands:
//   run      integrate the configured system, write snapshots + diagnostics
//   sweep    cartesian product over sweep.{epsilon,dr,dt,amplitude}
//   verify   run the module invariant suites against a fresh run
//   analyze  blowup-analysis pipeline (optionally on the synthetic fixture)
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 configuration
// or usage error, 3 solver divergence (partial artifacts retained).

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "els/blowup.hpp"
#include "els/config.hpp"
#include "els/diagnostics.hpp"
#include "els/director.hpp"
#include "els/errors.hpp"
#include "els/gl.hpp"
#include "els/grid.hpp"
#include "els/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitDiverged = 3;

struct Options {
    std::string config_path;
    std::string out_dir;  // empty: use config's output.directory
    std::optional<std::uint64_t> seed;
};

els::RunConfig load(const Options& opt) {
    els::RunConfig cfg = els::load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output.directory = opt.out_dir;
    return cfg;
}

els::RadialGrid make_grid(const els::RunConfig& cfg) {
    return els::RadialGrid(cfg.r_max, cfg.n_cells);
}

void write_summary_json(const std::string& dir, const json& doc) {
    std::ofstream out(dir + "/summary.json");
    out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

int cmd_run(const Options& opt) {
    els::RunConfig cfg = load(opt);
    els::RadialGrid grid = make_grid(cfg);
    els::Trajectory traj = els::run(cfg.solver, grid);

    fs::create_directories(cfg.output.directory);
    if (cfg.output.csv) els::write_trajectory(cfg.output.directory, traj);
    if (cfg.output.json) {
        json doc;
        doc["diverged"] = traj.diverged;
        doc["failure_time"] = traj.failure_time;
        doc["snapshots"] = traj.snapshots.size();
        doc["final_time"] = traj.snapshots.back().time;
        doc["final_energy_welss"] = els::welss_energy(traj.snapshots.back());
        write_summary_json(cfg.output.directory, doc);
    }

    if (cfg.gl_epsilon) {
        els::GLConfig glc;
        glc.epsilon = *cfg.gl_epsilon;
        glc.dt = cfg.solver.dt;
        glc.t_end = cfg.solver.t_end;
        glc.cfl_sigma = cfg.solver.cfl_sigma;
        glc.initial_data = cfg.solver.initial_data;
        glc.snapshot_every = cfg.solver.snapshot_every;
        els::GLTrajectory gt = els::gl_run(glc, grid);
        if (cfg.output.csv) {
            std::ofstream out(cfg.output.directory + "/gl_energies.csv");
            out << "t,kinetic,elastic,penalty,fluid,total\n";
            for (const auto& [t, e] : gt.energies) {
                out << els::format_double(t) << ',' << els::format_double(e.kinetic)
                    << ',' << els::format_double(e.elastic) << ','
                    << els::format_double(e.penalty) << ','
                    << els::format_double(e.fluid) << ','
                    << els::format_double(e.total) << '\n';
            }
        }
        if (gt.diverged) return kExitDiverged;
    }

    if (traj.diverged) {
        std::cerr << "run: solver diverged at t = " << traj.failure_time << "\n";
        return kExitDiverged;
    }
    std::cout << "run: " << traj.snapshots.size() << " snapshots -> "
              << cfg.output.directory << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::size_t thread_cap() {
    if (const char* env = std::getenv("ELS_THREADS")) {
        const long n = std::atol(env);
        if (n > 0) return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct SweepPoint {
    std::optional<double> epsilon, dr, dt, amplitude;
    std::string tag;
};

int cmd_sweep(const Options& opt) {
    els::RunConfig base = load(opt);

    auto axis = [](const std::vector<double>& v) {
        // A missing axis contributes one "keep the base value" point.
        return v.empty() ? std::vector<std::optional<double>>{std::nullopt}
                         : [&] {
                               std::vector<std::optional<double>> out;
                               for (double x : v) out.emplace_back(x);
                               return out;
                           }();
    };

    std::vector<SweepPoint> points;
    for (const auto& e : axis(base.sweep.epsilon)) {
        for (const auto& dr : axis(base.sweep.dr)) {
            for (const auto& dt : axis(base.sweep.dt)) {
                for (const auto& a : axis(base.sweep.amplitude)) {
                    SweepPoint p{e, dr, dt, a, ""};
                    std::ostringstream tag;
                    tag << "run";
                    auto part = [&tag](const char* k, const std::optional<double>& x) {
                        if (x) tag << "_" << k << *x;
                    };
                    part("eps", e);
                    part("dr", dr);
                    part("dt", dt);
                    part("amp", a);
                    p.tag = tag.str();
                    points.push_back(std::move(p));
                }
            }
        }
    }
    if (points.size() == 1 && points[0].tag == "run") {
        std::cerr << "sweep: config has an empty sweep section\n";
        return kExitConfigError;
    }

    fs::create_directories(base.output.directory);
    std::atomic<int> worst{kExitOk};
    const std::size_t cap = thread_cap();
    std::vector<std::future<void>> inflight;

    auto launch = [&](const SweepPoint& p) {
        return std::async(std::launch::async, [&, p] {
            els::RunConfig cfg = base;
            if (p.epsilon) cfg.gl_epsilon = *p.epsilon;
            if (p.dr) {
                cfg.n_cells = static_cast<std::size_t>(cfg.r_max / *p.dr + 0.5);
            }
            if (p.dt) cfg.solver.dt = *p.dt;
            if (p.amplitude) {
                cfg.solver.initial_data.phi0 =
                    els::GaussianBump{*p.amplitude, 2.0, 0.5};
            }
            cfg.output.directory = base.output.directory + "/" + p.tag;
            int rc = kExitOk;
            try {
                els::RadialGrid grid = make_grid(cfg);
                els::Trajectory traj = els::run(cfg.solver, grid);
                fs::create_directories(cfg.output.directory);
                els::write_trajectory(cfg.output.directory, traj);
                if (traj.diverged) rc = kExitDiverged;
            } catch (const els::ConfigError& e) {
                std::cerr << p.tag << ": " << e.what() << "\n";
                rc = kExitConfigError;
            } catch (const els::DivergenceError&) {
                rc = kExitDiverged;
            }
            int expected = worst.load();
            while (rc > expected && !worst.compare_exchange_weak(expected, rc)) {
            }
        });
    };

    for (const auto& p : points) {
        if (inflight.size() >= cap) {
            inflight.front().wait();
            inflight.erase(inflight.begin());
        }
        inflight.push_back(launch(p));
    }
    for (auto& f : inflight) f.wait();

    std::cout << "sweep: " << points.size() << " runs -> "
              << base.output.directory << "\n";
    return worst.load();
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    double measured;
    double bound;
    bool pass;
};

int cmd_verify(const Options& opt) {
    els::RunConfig cfg = load(opt);
    els::RadialGrid grid = make_grid(cfg);
    const double dr = grid.dr();
    const double slack = 1e-8 + 10.0 * cfg.solver.dt * dr * dr;

    std::vector<CheckRow> rows;
    auto check = [&rows](const std::string& name, double measured, double bound) {
        rows.push_back({name, measured, bound, measured <= bound});
    };

    els::Trajectory traj = els::run(cfg.solver, grid);
    if (traj.diverged) {
        std::cerr << "verify: solver diverged at t = " << traj.failure_time << "\n";
        return kExitDiverged;
    }

    double max_residual = 0.0;
    for (const auto& d : traj.diagnostics) {
        max_residual = std::max(max_residual, d.dissipation_residual);
    }
    check("dissipation residual per step", max_residual, slack);
    check("boundary drift", els::boundary_drift(traj), 0.0);

    double h_violation = 0.0;
    for (const auto& s : traj.snapshots) {
        h_violation = std::max(h_violation, els::h_bound_check(s));
    }
    check("H(phi) <= E(r,t) violation", h_violation, 1e-8);

    if (cfg.diagnostics.cone_T > 0.0) {
        const double T = cfg.diagnostics.cone_T;
        double worst_integrand = 0.0;
        double worst_flux = 0.0;
        for (double tau : cfg.diagnostics.taus) {
            els::FluxReport rep = els::flux(traj, T, tau);
            worst_integrand = std::max(worst_integrand, -rep.integrand_min);
            worst_flux = std::max(worst_flux, -rep.flux_value);
        }
        check("cone integrand negativity", worst_integrand, 1e-12);
        check("flux negativity", worst_flux, 1e-10);
    }

    if (cfg.gl_epsilon) {
        els::GLConfig glc;
        glc.epsilon = *cfg.gl_epsilon;
        glc.dt = cfg.solver.dt;
        glc.t_end = cfg.solver.t_end;
        glc.cfl_sigma = cfg.solver.cfl_sigma;
        glc.initial_data = cfg.solver.initial_data;
        glc.snapshot_every = cfg.solver.snapshot_every;
        els::GLTrajectory gt = els::gl_run(glc, grid);
        if (gt.diverged) return kExitDiverged;
        double max_increase = 0.0;
        for (std::size_t k = 1; k < gt.energies.size(); ++k) {
            max_increase = std::max(max_increase, gt.energies[k].second.total -
                                                      gt.energies[k - 1].second.total);
        }
        check("GL energy increase per step", max_increase, slack);
        double axis_u = 0.0;
        for (const auto& s : gt.snapshots) axis_u = std::max(axis_u, std::abs(s.u[0]));
        check("GL axis |u(0,t)|", axis_u, 0.0);
    }

    bool all_pass = true;
    std::cout << "check                               measured      bound         result\n";
    for (const auto& r : rows) {
        std::ostringstream line;
        line.setf(std::ios::left);
        line.width(36);
        line << r.name;
        std::cout << line.str();
        std::printf("%-14.4e%-14.4e%s\n", r.measured, r.bound,
                    r.pass ? "PASS" : "FAIL");
        all_pass = all_pass && r.pass;
    }
    return all_pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const Options& opt, bool synthetic, double synth_t_last,
                double synth_spacing) {
    els::RunConfig cfg = load(opt);
    els::RadialGrid grid = make_grid(cfg);

    els::Trajectory traj(grid);
    if (synthetic) {
        std::vector<double> times;
        for (double t = 0.0; t <= synth_t_last + 1e-12; t += synth_spacing) {
            times.push_back(t);
        }
        traj = els::synth_selfsimilar([](double t) { return 1.0 - t; }, grid,
                                      times, [](double) { return -1.0; });
    } else {
        const std::string snap_index = cfg.output.directory + "/snapshots/index.csv";
        if (fs::exists(snap_index)) {
            traj = els::read_trajectory(cfg.output.directory);
        } else {
            traj = els::run(cfg.solver, grid);
        }
    }
    if (traj.diverged) {
        std::cerr << "analyze: source run diverged at t = " << traj.failure_time
                  << "\n";
        return kExitDiverged;
    }

    els::RadialGrid comparison(60.0, 600);
    auto report =
        els::analyze_blowup(traj, cfg.diagnostics.epsilon0, cfg.diagnostics.epsilon1,
                            comparison, 1.0, 50.0);

    fs::create_directories(cfg.output.directory);
    json doc;
    doc["epsilon0"] = cfg.diagnostics.epsilon0;
    doc["epsilon1"] = cfg.diagnostics.epsilon1;
    doc["detected"] = report.has_value();
    // sup-norm smallness is a numerical surrogate for the weak convergence
    // h_i -> 0; no discrete weak topology is defined.
    doc["h_convergence_surrogate"] = "sup-norm of rescaled h";
    if (report) {
        const auto& rep = *report;
        doc["t0"] = rep.candidate.t0;
        doc["resolution_limited"] = rep.candidate.resolution_limited;
        doc["times"] = rep.candidate.times;
        doc["radii"] = rep.candidate.radii;
        doc["ratios"] = rep.candidate.ratios;
        doc["c_fits"] = rep.c_fits;
        doc["h_sup_rescaled"] = rep.h_sup_rescaled;
        doc["c_fit_last"] = rep.fit.c_fit;
        doc["fit_residual_l2"] = rep.fit.residual_l2;
        doc["harmonic_residual"] = rep.fit.harmonic_residual;

        std::ofstream profiles(cfg.output.directory + "/rescaled_profiles.csv");
        profiles << "r";
        for (std::size_t i = 0; i < rep.rescaled_profiles.size(); ++i) {
            profiles << ",phi_" << i << ",h_" << i;
        }
        profiles << "\n";
        for (std::size_t j = 0; j < comparison.n_nodes(); ++j) {
            profiles << els::format_double(comparison.node(j));
            for (const auto& [phi_i, h_i] : rep.rescaled_profiles) {
                profiles << ',' << els::format_double(phi_i[j]) << ','
                         << els::format_double(h_i[j]);
            }
            profiles << "\n";
        }
    }
    std::ofstream out(cfg.output.directory + "/blowup_report.json");
    out << doc.dump(2) << "\n";

    std::cout << "analyze: " << (report ? "candidate detected" : "no concentration")
              << " -> " << cfg.output.directory << "/blowup_report.json\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"els — radial Ericksen-Leslie liquid-crystal solver"};
    app.require_subcommand(1);

    Options opt;
    bool synthetic = false;
    double synth_t_last = 0.995;
    double synth_spacing = 0.005;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "config file (JSON)")
            ->required();
        sub->add_option("--out", opt.out_dir, "output directory override");
        sub->add_option("--seed", opt.seed, "RNG seed for noise fixtures");
    };

    CLI::App* c_run = app.add_subcommand("run", "integrate and serialize");
    CLI::App* c_sweep = app.add_subcommand("sweep", "parameter sweep");
    CLI::App* c_verify = app.add_subcommand("verify", "invariant suites");
    CLI::App* c_analyze = app.add_subcommand("analyze", "blowup analysis");
    for (CLI::App* sub : {c_run, c_sweep, c_verify, c_analyze}) add_common(sub);
    c_analyze->add_flag("--synthetic", synthetic,
                        "analyze the built-in shrinking-soliton fixture");
    c_analyze->add_option("--synthetic-t-last", synth_t_last,
                          "last fixture snapshot time");
    c_analyze->add_option("--synthetic-spacing", synth_spacing,
                          "fixture snapshot spacing");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed()) return cmd_run(opt);
        if (c_sweep->parsed()) return cmd_sweep(opt);
        if (c_verify->parsed()) return cmd_verify(opt);
        if (c_analyze->parsed()) {
            return cmd_analyze(opt, synthetic, synth_t_last, synth_spacing);
        }
    } catch (const els::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const els::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitConfigError;
}
