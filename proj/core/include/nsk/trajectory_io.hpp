#pragma once

// Text trajectory format, version 1:
//
//   nskappa-trajectory 1
//   n <cells>
//   snapshots <count>
//   params <mu> <R> <cv> <kappa>
//   solver <dt> <t_end> <cfl_safety> <snapshot_every> <snapshot_dt> <order> <max_halvings>
//   rho0 <n values>
//   dt_history <count> <values>
//   data
//   <t> <rho x n> <u x n> <theta x n> <x_pos x n>     (one row per snapshot)
//
// Every double is written as a C99 hex float, so read(write(t)) == t bit for bit.

#include <filesystem>
#include <iosfwd>

#include "nsk/solver.hpp"

namespace nsk {

void write_trajectory(std::ostream& out, const Trajectory& traj);
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);

/// FormatError on version, header or row-length mismatch; the message names
/// the offending data row.
Trajectory read_trajectory(std::istream& in);
Trajectory read_trajectory(const std::filesystem::path& path);

}  // namespace nsk
