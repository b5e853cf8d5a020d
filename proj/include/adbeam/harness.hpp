#pragma once

#include "adbeam/config.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace adbeam::harness {

struct RunResult {
    nlohmann::json summary;
    /// False for a capped-law run whose energy rose above E(0) (1 + 1e-3).
    bool dissipation_ok = true;
};

/// Simulates the config and writes trajectory.csv, energy.csv and
/// summary.json into out_dir.
RunResult run(const SimConfig& config, const std::filesystem::path& out_dir);

enum class Experiment { Adhesion, LongTime, Linearize, Regularize, Examples };

std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view name(Experiment e);

/// Runs a harness, writes report.json plus per-run CSVs under out_dir/runs,
/// and returns the report. Cases that cannot be run are listed with a reason.
nlohmann::json experiment(Experiment e, const SimConfig& config, const std::filesystem::path& out_dir);

/// Relative capped-law dissipation tolerance.
inline constexpr double dissipation_tolerance = 1e-3;

} // namespace adbeam::harness
