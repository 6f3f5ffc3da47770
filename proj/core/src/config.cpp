#include "els/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "els/errors.hpp"

namespace els {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    std::vector<std::string> unknown;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) unknown.push_back(it.key());
    }
    if (!unknown.empty()) {
        std::ostringstream os;
        os << "unknown key(s) in " << where << ":";
        for (const auto& k : unknown) os << " '" << k << "'";
        throw ConfigError(os.str());
    }
}

Profile parse_profile(const json& obj, const std::string& where) {
    if (!obj.is_object() || !obj.contains("kind")) {
        throw ConfigError(where + ": profile must be an object with a 'kind'");
    }
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "zero") {
        check_keys(obj, where, {"kind"});
        return ZeroProfile{};
    }
    if (kind == "gaussian_bump") {
        check_keys(obj, where, {"kind", "amplitude", "center", "width"});
        return GaussianBump{obj.at("amplitude").get<double>(),
                            obj.at("center").get<double>(),
                            obj.at("width").get<double>()};
    }
    if (kind == "harmonic_cap") {
        check_keys(obj, where, {"kind", "c", "cutoff"});
        return HarmonicCap{obj.at("c").get<double>(),
                           obj.value("cutoff", 0.0)};
    }
    if (kind == "table") {
        check_keys(obj, where, {"kind", "values"});
        return TableProfile{obj.at("values").get<std::vector<double>>()};
    }
    throw ConfigError(where + ": unknown profile kind '" + kind + "'");
}

InitialDataSpec parse_initial_data(const json& obj) {
    InitialDataSpec spec;
    if (obj.contains("kind")) {
        // Shorthand: a single profile meaning phi0, with phi1 = v0 = 0.
        spec.phi0 = parse_profile(obj, "solver.initial_data");
        return spec;
    }
    check_keys(obj, "solver.initial_data", {"phi0", "phi1", "v0"});
    if (obj.contains("phi0")) spec.phi0 = parse_profile(obj.at("phi0"), "initial_data.phi0");
    if (obj.contains("phi1")) spec.phi1 = parse_profile(obj.at("phi1"), "initial_data.phi1");
    if (obj.contains("v0")) spec.v0 = parse_profile(obj.at("v0"), "initial_data.v0");
    return spec;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc, "config",
               {"grid", "solver", "gl", "diagnostics", "output", "sweep"});

    RunConfig cfg;

    const json& grid = doc.at("grid");
    check_keys(grid, "grid", {"r_max", "n_cells"});
    cfg.r_max = grid.at("r_max").get<double>();
    cfg.n_cells = grid.at("n_cells").get<std::size_t>();
    if (!(cfg.r_max > 0.0)) throw ConfigError("constraint violated: grid.r_max > 0");
    if (cfg.n_cells < 8) throw ConfigError("constraint violated: grid.n_cells >= 8");

    const json& solver = doc.at("solver");
    check_keys(solver, "solver",
               {"formulation", "dt", "t_end", "cfl_sigma", "initial_data",
                "snapshot_every", "enforce_cone_guard"});
    const std::string form = solver.value("formulation", std::string("h_form"));
    if (form == "v_form") {
        cfg.solver.formulation = Formulation::VForm;
    } else if (form == "h_form") {
        cfg.solver.formulation = Formulation::HForm;
    } else if (form == "sigma_model") {
        cfg.solver.formulation = Formulation::SigmaModel;
    } else {
        throw ConfigError("unknown solver.formulation '" + form + "'");
    }
    cfg.solver.dt = solver.at("dt").get<double>();
    cfg.solver.t_end = solver.at("t_end").get<double>();
    cfg.solver.cfl_sigma = solver.value("cfl_sigma", 0.5);
    cfg.solver.snapshot_every = solver.value("snapshot_every", std::size_t{10});
    cfg.solver.enforce_cone_guard = solver.value("enforce_cone_guard", true);
    if (solver.contains("initial_data")) {
        cfg.solver.initial_data = parse_initial_data(solver.at("initial_data"));
    }
    if (!(cfg.solver.dt > 0.0)) throw ConfigError("constraint violated: solver.dt > 0");
    if (!(cfg.solver.t_end > 0.0)) throw ConfigError("constraint violated: solver.t_end > 0");
    if (!(cfg.solver.cfl_sigma > 0.0 && cfg.solver.cfl_sigma <= 1.0)) {
        throw ConfigError("constraint violated: solver.cfl_sigma in (0, 1]");
    }
    const double dr = cfg.r_max / static_cast<double>(cfg.n_cells);
    if (cfg.solver.dt > cfg.solver.cfl_sigma * dr + 1e-15) {
        throw ConfigError("constraint violated: solver.dt <= cfl_sigma * dr (CFL)");
    }

    if (doc.contains("gl")) {
        check_keys(doc.at("gl"), "gl", {"epsilon"});
        cfg.gl_epsilon = doc.at("gl").at("epsilon").get<double>();
        if (!(*cfg.gl_epsilon > 0.0)) {
            throw ConfigError("constraint violated: gl.epsilon > 0");
        }
    }

    if (doc.contains("diagnostics")) {
        const json& diag = doc.at("diagnostics");
        check_keys(diag, "diagnostics",
                   {"cone_T", "lambdas", "taus", "epsilon0", "epsilon1"});
        cfg.diagnostics.cone_T = diag.value("cone_T", -1.0);
        if (diag.contains("lambdas")) {
            cfg.diagnostics.lambdas = diag.at("lambdas").get<std::vector<double>>();
        }
        if (diag.contains("taus")) {
            cfg.diagnostics.taus = diag.at("taus").get<std::vector<double>>();
        }
        cfg.diagnostics.epsilon0 = diag.value("epsilon0", 1.0);
        cfg.diagnostics.epsilon1 = diag.value("epsilon1", 0.25);
    }
    if (!(3.0 * cfg.diagnostics.epsilon1 < cfg.diagnostics.epsilon0)) {
        throw ConfigError("constraint violated: 3*epsilon1 < epsilon0");
    }

    if (doc.contains("output")) {
        const json& out = doc.at("output");
        check_keys(out, "output", {"directory", "formats", "snapshot_every"});
        cfg.output.directory = out.value("directory", std::string("."));
        if (out.contains("formats")) {
            cfg.output.csv = false;
            cfg.output.json = false;
            for (const auto& f : out.at("formats")) {
                const std::string name = f.get<std::string>();
                if (name == "csv") {
                    cfg.output.csv = true;
                } else if (name == "json") {
                    cfg.output.json = true;
                } else {
                    throw ConfigError("unknown output format '" + name + "'");
                }
            }
        }
        if (out.contains("snapshot_every")) {
            cfg.solver.snapshot_every = out.at("snapshot_every").get<std::size_t>();
        }
    }
    if (cfg.solver.snapshot_every == 0) {
        throw ConfigError("constraint violated: snapshot_every > 0");
    }

    if (doc.contains("sweep")) {
        const json& sw = doc.at("sweep");
        check_keys(sw, "sweep", {"epsilon", "dr", "dt", "amplitude"});
        if (sw.contains("epsilon")) cfg.sweep.epsilon = sw.at("epsilon").get<std::vector<double>>();
        if (sw.contains("dr")) cfg.sweep.dr = sw.at("dr").get<std::vector<double>>();
        if (sw.contains("dt")) cfg.sweep.dt = sw.at("dt").get<std::vector<double>>();
        if (sw.contains("amplitude")) cfg.sweep.amplitude = sw.at("amplitude").get<std::vector<double>>();
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace els
