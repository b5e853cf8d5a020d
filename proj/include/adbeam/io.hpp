#pragma once

#include "adbeam/dynamics.hpp"
#include "adbeam/oracles.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace adbeam::io {

// Series files: comma separated, one header row, every number printed with
// 17 significant digits so that values round-trip exactly.

/// t,x_0,...,x_{n-1},u_0,...,u_{n-1}
std::string trajectory_header(std::size_t n_points);
/// t,kinetic,bending,adhesion,total,contact_fraction
std::string energy_header();

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_energy_csv(std::ostream& out, const Trajectory& trajectory);

/// Spatially uniform oracle series in the trajectory schema, sampled on `grid`.
void write_oracle_csv(std::ostream& out, const oracles::OdeSeries& series, const Grid& grid);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
void write_energy_csv(const std::filesystem::path& path, const Trajectory& trajectory);
void write_oracle_csv(const std::filesystem::path& path, const oracles::OdeSeries& series, const Grid& grid);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// "%.17g"
std::string format_number(double x);

} // namespace adbeam::io
