#include "els/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "els/errors.hpp"

namespace els {

namespace fs = std::filesystem;

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_snapshot_csv(const std::string& path, const FieldState& state) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "r,phi,phi_t,v,h\n";
    for (std::size_t j = 0; j < state.grid.n_nodes(); ++j) {
        out << format_double(state.grid.node(j)) << ','
            << format_double(state.phi[j]) << ','
            << format_double(state.phi_t[j]) << ','
            << format_double(state.v[j]) << ','
            << format_double(state.h[j]) << '\n';
    }
}

namespace {

std::vector<std::vector<double>> read_csv_rows(const std::string& path,
                                               std::size_t n_cols) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != n_cols) {
            throw ConfigError("malformed CSV row in " + path);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

FieldState read_snapshot_csv(const std::string& path, double time) {
    const auto rows = read_csv_rows(path, 5);
    if (rows.size() < 9) throw ConfigError("snapshot too small: " + path);
    const double r_max = rows.back()[0];
    RadialGrid grid(r_max, rows.size() - 1);
    FieldState state(grid);
    state.time = time;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        state.phi[j] = rows[j][1];
        state.phi_t[j] = rows[j][2];
        state.v[j] = rows[j][3];
        state.h[j] = rows[j][4];
    }
    state.phi_prev = state.phi;
    return state;
}

void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "t,E_total_welss,E_total_wels,dissipation_residual,sup_hr,sup_ht\n";
    for (const StepDiagnostics& d : traj.diagnostics) {
        out << format_double(d.time) << ',' << format_double(d.energy_welss)
            << ',' << format_double(d.energy_wels) << ','
            << format_double(d.dissipation_residual) << ','
            << format_double(d.sup_hr) << ',' << format_double(d.sup_ht) << '\n';
    }
}

void write_trajectory(const std::string& dir, const Trajectory& traj) {
    fs::create_directories(fs::path(dir) / "snapshots");
    std::ofstream index(fs::path(dir) / "snapshots" / "index.csv");
    index << "snapshot,time,file\n";
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%06zu.csv", i);
        write_snapshot_csv((fs::path(dir) / "snapshots" / name).string(),
                           traj.snapshots[i]);
        index << i << ',' << format_double(traj.snapshots[i].time) << ','
              << name << '\n';
    }
    write_diagnostics_csv((fs::path(dir) / "diagnostics.csv").string(), traj);
}

Trajectory read_trajectory(const std::string& dir) {
    const fs::path snapdir = fs::path(dir) / "snapshots";
    std::ifstream index(snapdir / "index.csv");
    if (!index) throw ConfigError("missing snapshot index in " + dir);
    std::string line;
    std::getline(index, line);
    std::vector<std::pair<double, std::string>> entries;
    while (std::getline(index, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, time, file;
        std::getline(ss, id, ',');
        std::getline(ss, time, ',');
        std::getline(ss, file, ',');
        entries.emplace_back(std::stod(time), file);
    }
    if (entries.empty()) throw ConfigError("empty snapshot index in " + dir);

    FieldState first = read_snapshot_csv((snapdir / entries[0].second).string(),
                                         entries[0].first);
    Trajectory traj(first.grid);
    traj.snapshots.push_back(std::move(first));
    for (std::size_t i = 1; i < entries.size(); ++i) {
        traj.snapshots.push_back(read_snapshot_csv(
            (snapdir / entries[i].second).string(), entries[i].first));
    }
    return traj;
}

}  // namespace els
