#pragma once

#include <string>

#include "els/director.hpp"

namespace els {

/// All numerics are serialized with 17 significant digits for bit-exact
/// replay; readers parse with full double precision.

/// Snapshot CSV, columns: r, phi, phi_t, v, h.
void write_snapshot_csv(const std::string& path, const FieldState& state);
FieldState read_snapshot_csv(const std::string& path, double time);

/// Diagnostic series CSV, columns:
/// t, E_total_welss, E_total_wels, dissipation_residual, sup_hr, sup_ht.
void write_diagnostics_csv(const std::string& path, const Trajectory& traj);

/// Writes snapshots/snap_NNNNNN.csv, snapshots/index.csv (snapshot, time,
/// file) and diagnostics.csv under dir.
void write_trajectory(const std::string& dir, const Trajectory& traj);

/// Reload a trajectory written by write_trajectory (diagnostics are not
/// reloaded; analysis recomputes from the snapshots).
Trajectory read_trajectory(const std::string& dir);

std::string format_double(double x);

}  // namespace els
