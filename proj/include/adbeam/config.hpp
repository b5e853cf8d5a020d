#pragma once

#include "adbeam/analysis.hpp"
#include "adbeam/dynamics.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace adbeam {

struct UniformData {
    double u0 = 0.0;
    double v0 = 0.0;
};

/// u0 = amplitude cos(mode pi x / L), u1 = 0.
struct CosineData {
    double amplitude = 0.0;
    int mode = 1;
};

/// CSV with a header naming columns u0 and u1 (an x column is ignored).
/// Relative paths resolve against the config file's directory.
struct FileData {
    std::string path;
};

using InitialSpec = std::variant<UniformData, CosineData, FileData>;

/// Optional knobs read by the experiment harnesses.
struct HarnessOptions {
    std::optional<double> eps;
    std::optional<std::vector<double>> eps_list;
    std::optional<std::vector<int>> scales;
    std::optional<TimeWindow> window;
    std::optional<int> random_cases;
    std::optional<double> max_sup;
    std::optional<double> max_energy;
    /// linearize: "scaled" (data / n) or "high_frequency".
    /// regularize: "fixed" (the configured data for every eps) or "below_one" (uniform 1 - eps).
    std::optional<std::string> family;
};

struct SimConfig {
    BeamParams params;
    std::size_t n_points = 401;
    PotentialSpec potential = PotentialSpec::exact();
    InitialSpec initial = UniformData{};
    double horizon = 1.0;
    std::optional<double> dt; ///< nullopt is "auto"
    std::size_t record_stride = 1;
    std::uint64_t seed = 0;
    HarnessOptions harness;
    /// Directory used to resolve FileData paths. Not serialized.
    std::filesystem::path base_dir;
};

/// Parses and validates. Errors are ConfigError carrying the 1-based line of
/// the offending key when it can be located in `text`.
SimConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
SimConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const SimConfig& config);
nlohmann::json to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const nlohmann::json& j);

/// Samples the initial condition on the config's grid.
InitialData build_initial_data(const SimConfig& config);

/// Resolves the config into a ready-to-run Simulation.
Simulation build_simulation(const SimConfig& config);

} // namespace adbeam
