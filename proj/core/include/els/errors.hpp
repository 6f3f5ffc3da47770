#pragma once

#include <stdexcept>
#include <string>

namespace els {

// Bad user-supplied configuration (grid sizes, time steps, spec fields).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometry outside the domain (integration bounds, cones, rescaling windows).
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller broke an operation's contract (e.g. nonzero axis value).
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrator guard tripped: a field left the finite range.
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& what, double t)
        : std::runtime_error(what), time(t) {}
    double time;
};

// Trajectories passed to a comparison do not share grid/times.
struct ComparisonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Snapshot spacing too coarse for a requested cone integral.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Profile fit attempted on (near-)trivial data.
struct FitDegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace els
