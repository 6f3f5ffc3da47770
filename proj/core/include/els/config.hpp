#pragma once

#include <optional>
#include <string>
#include <vector>

#include "els/director.hpp"

namespace els {

struct DiagnosticsConfig {
    double cone_T = -1.0;  // < 0: no cone reports requested
    std::vector<double> lambdas;
    std::vector<double> taus;
    double epsilon0 = 1.0;
    double epsilon1 = 0.25;
};

struct OutputConfig {
    std::string directory = ".";
    bool csv = true;
    bool json = false;
};

/// Parameter grids for the sweep subcommand (cartesian product).
struct SweepConfig {
    std::vector<double> epsilon;
    std::vector<double> dr;
    std::vector<double> dt;
    std::vector<double> amplitude;
};

struct RunConfig {
    double r_max = 0.0;
    std::size_t n_cells = 0;
    SolverConfig solver;
    std::optional<double> gl_epsilon;
    DiagnosticsConfig diagnostics;
    OutputConfig output;
    SweepConfig sweep;
};

/// Parse and validate a JSON config document. Unknown keys are an error
/// (all of them are listed); constraint violations name the constraint.
RunConfig parse_config(const std::string& text);

/// Convenience: read the file and parse.
RunConfig load_config(const std::string& path);

}  // namespace els
