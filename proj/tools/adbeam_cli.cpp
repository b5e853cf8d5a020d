// adbeam: simulate an adhesive beam or run one of the analysis harnesses.
//
//   adbeam run --config run.json [--out dir]
//   adbeam experiment examples --config run.json [--out dir]
//
// Output goes to --out, else $ADBEAM_OUT_DIR, else ./out.
// Exit status: 0 success, 1 invalid input, 2 numerical failure.

#include "adbeam/config.hpp"
#include "adbeam/error.hpp"
#include "adbeam/harness.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_numerical = 2;

std::filesystem::path output_dir(const std::string& flag)
{
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("ADBEAM_OUT_DIR"); env && *env) return env;
    return "out";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Flexural waves in a beam adhering to a substrate"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    std::string experiment_name;

    CLI::App* run = app.add_subcommand("run", "Simulate one configuration");
    run->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_flag, "Output directory");

    CLI::App* exp = app.add_subcommand("experiment", "Run an analysis harness");
    exp->add_option("name", experiment_name, "adhesion | longtime | linearize | regularize | examples")
        ->required()
        ->check(CLI::IsMember({"adhesion", "longtime", "linearize", "regularize", "examples"}));
    exp->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    exp->add_option("--out", out_flag, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    const std::filesystem::path out = output_dir(out_flag);
    try {
        const adbeam::SimConfig config = adbeam::load_config(config_path);
        if (run->parsed()) {
            const adbeam::harness::RunResult r = adbeam::harness::run(config, out);
            std::cout << "wrote " << (out / "summary.json").string() << "\n";
            std::cout << "drift " << r.summary["drift"].get<double>() << ", max |u| "
                      << r.summary["max_abs_displacement"].get<double>() << "\n";
            if (!r.dissipation_ok) {
                std::cerr << "error: energy rose above E(0) by " << r.summary["max_excess"].get<double>()
                          << " (tolerance " << adbeam::harness::dissipation_tolerance << ")\n";
                return exit_numerical;
            }
        } else {
            const auto e = adbeam::harness::parse_experiment(experiment_name);
            const nlohmann::json report = adbeam::harness::experiment(*e, config, out);
            std::cout << "wrote " << (out / "report.json").string() << "\n";
            std::cout << report["verdicts"].dump() << "\n";
            for (const auto& skip : report["skips"])
                std::cout << "skipped " << skip["case"].get<std::string>() << ": "
                          << skip["reason"].get<std::string>() << "\n";
        }
    } catch (const adbeam::ConfigError& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return exit_invalid;
    } catch (const adbeam::StabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const adbeam::NumericalFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const adbeam::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
