#include "adbeam/config.hpp"
#include "adbeam/error.hpp"
#include "adbeam/harness.hpp"
#include "adbeam/io.hpp"

#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace adbeam;

namespace {

const char* base_config = R"({
  "params": {"rho": 1.0, "mu": 1.0, "length": 1.0},
  "grid": {"n_points": 21},
  "potential": {"kind": "smoothed", "eps": 0.1},
  "initial": {"type": "uniform", "u0": 0.9, "v0": 0.0},
  "horizon": 0.5,
  "dt": "auto",
  "record_stride": 50,
  "seed": 3
})";

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    const auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

std::size_t error_line(const std::string& text, const std::filesystem::path& base = {})
{
    try {
        parse_config(text, base);
    } catch (const ConfigError& e) {
        return e.line();
    }
    FAIL("config was accepted");
    return 0;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

struct TempDir {
    std::filesystem::path path;
    TempDir()
        : path(std::filesystem::temp_directory_path() /
               ("adbeam_test_" + std::to_string(::getpid()) + "_" + std::to_string(std::rand())))
    {
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::string golden(const char* name) { return first_line(read_file(std::filesystem::path(ADBEAM_GOLDEN_DIR) / name)); }

} // namespace

TEST_SUITE("config_io")
{
    TEST_CASE("parses a full config")
    {
        const SimConfig c = parse_config(base_config);
        CHECK(c.n_points == 21);
        CHECK(c.potential.kind == PotentialKind::SmoothedEps);
        CHECK(c.potential.eps == 0.1);
        CHECK_FALSE(c.dt.has_value());
        CHECK(c.record_stride == 50);
        CHECK(c.seed == 3);
        const auto& u = std::get<UniformData>(c.initial);
        CHECK(u.u0 == 0.9);
        const Simulation sim = build_simulation(c);
        CHECK(sim.u0 == std::vector<double>(21, 0.9));
    }

    TEST_CASE("validation errors point at the offending line")
    {
        const std::string text = base_config;
        CHECK(error_line(replace(text, "\"horizon\": 0.5", "\"horizon\": 0")) == 6);
        CHECK(error_line(replace(text, "\"horizon\": 0.5", "\"horizon\": -1")) == 6);
        CHECK(error_line(replace(text, "\"mu\": 1.0", "\"mu\": 1.0, \"nu\": 2")) == 2);
        CHECK(error_line(replace(text, "\"eps\": 0.1", "\"eps\": 2.5")) == 4);
        CHECK(error_line(replace(text, "\"kind\": \"smoothed\"", "\"kind\": \"soft\"")) == 4);
        CHECK(error_line(replace(text, "\"n_points\": 21", "\"n_points\": 4")) == 3);
        CHECK(error_line(replace(text, "\"dt\": \"auto\"", "\"dt\": \"fast\"")) == 7);
        CHECK(error_line(replace(text, "\"dt\": \"auto\"", "\"dt\": 0.01")) == 7);
        CHECK(error_line(replace(text, "\"record_stride\": 50", "\"record_stride\": 0")) == 8);
        CHECK(error_line(replace(text, "\"seed\": 3", "\"seed\": -3")) == 9);
        CHECK(error_line(replace(text, "\"record_stride\": 50,", "\"record_stride\": 50,,")) == 8);
        CHECK(error_line(replace(text, "  \"horizon\": 0.5,\n", "")) == 0);
        CHECK(error_line(replace(text, "\"u0\": 0.9", "\"u0\": \"high\"")) == 5);
    }

    TEST_CASE("explicit dt below the limit is kept")
    {
        const SimConfig c = parse_config(replace(base_config, "\"dt\": \"auto\"", "\"dt\": 1e-4"));
        REQUIRE(c.dt.has_value());
        CHECK(*c.dt == 1e-4);
    }

    TEST_CASE("cosine data")
    {
        const SimConfig c = parse_config(
            replace(base_config, R"({"type": "uniform", "u0": 0.9, "v0": 0.0})", R"({"type": "cosine", "amplitude": 0.05, "mode": 2})"));
        const InitialData d = build_initial_data(c);
        CHECK(d.u0.front() == 0.05);
        CHECK(d.u0[5] == doctest::Approx(0.05 * std::cos(2.0 * M_PI * 0.25)).scale(1.0));
        CHECK(d.u0.back() == doctest::Approx(0.05).epsilon(1e-15));
    }

    TEST_CASE("file data")
    {
        TempDir dir;
        {
            std::ofstream f(dir.path / "data.csv");
            f << "x,u0,u1\n";
            for (int i = 0; i < 21; ++i) f << i / 20.0 << "," << 0.01 * i << "," << -0.5 << "\n";
        }
        const std::string text =
            replace(base_config, R"({"type": "uniform", "u0": 0.9, "v0": 0.0})", R"({"type": "file", "path": "data.csv"})");
        const InitialData d = build_initial_data(parse_config(text, dir.path));
        CHECK(d.u0[20] == 0.2);
        CHECK(d.u1[3] == -0.5);

        CHECK_THROWS_AS(build_initial_data(parse_config(replace(text, "\"n_points\": 21", "\"n_points\": 22"), dir.path)),
                        ConfigError);
        CHECK_THROWS_AS(build_initial_data(parse_config(replace(text, "data.csv", "missing.csv"), dir.path)), ConfigError);
        {
            std::ofstream f(dir.path / "bad.csv");
            f << "x,u\n0,1\n";
        }
        CHECK_THROWS_AS(build_initial_data(parse_config(replace(text, "data.csv", "bad.csv"), dir.path)), ConfigError);
    }

    TEST_CASE("serialized configs reproduce the run bit for bit")
    {
        std::string text = replace(base_config, "\"seed\": 3", R"("seed": 3,
  "harness": {"eps_list": [0.1, 0.03], "scales": [1, 2], "window": [0.1, 0.4], "random_cases": 2,
              "max_sup": 0.7, "max_energy": 0.3, "family": "fixed", "eps": 0.05})");
        text = replace(text, "\"dt\": \"auto\"", "\"dt\": 0.00012345678901234567");
        const SimConfig c = parse_config(text);
        const nlohmann::json j = to_json(c);
        const SimConfig back = parse_config(j.dump(2));
        CHECK(to_json(back) == j);
        CHECK(*back.dt == *c.dt);
        CHECK(*back.harness.eps_list == *c.harness.eps_list);
        CHECK(back.harness.window->end == 0.4);

        TempDir dir;
        harness::run(c, dir.path / "a");
        harness::run(back, dir.path / "b");
        CHECK(read_file(dir.path / "a" / "trajectory.csv") == read_file(dir.path / "b" / "trajectory.csv"));
        CHECK(read_file(dir.path / "a" / "energy.csv") == read_file(dir.path / "b" / "energy.csv"));

        // The config embedded in a report is itself a valid config.
        const nlohmann::json summary = nlohmann::json::parse(read_file(dir.path / "a" / "summary.json"));
        CHECK(to_json(parse_config(summary["config"].dump())) == j);

        const PotentialSpec ps = potential_from_json(to_json(PotentialSpec::exact(1.25)));
        CHECK(ps.selection_at_one == 1.25);
    }

    TEST_CASE("csv headers match the golden files")
    {
        CHECK(io::energy_header() == golden("energy_header.txt"));
        CHECK(io::trajectory_header(5) == golden("trajectory_header_n5.txt"));

        Simulation sim;
        sim.n_points = 5;
        sim.u0.assign(5, 0.3);
        sim.u1.assign(5, 0.1);
        sim.horizon = 0.01;
        const Trajectory t = simulate(sim);
        std::ostringstream traj, en, oracle;
        io::write_trajectory_csv(traj, t);
        io::write_energy_csv(en, t);
        io::write_oracle_csv(oracle, oracles::uniform_ode_oracle(PotentialSpec::exact(), 1.0, 0.3, 0.1, 0.01, 0.005),
                             t.grid);
        CHECK(first_line(traj.str()) == golden("trajectory_header_n5.txt"));
        CHECK(first_line(en.str()) == golden("energy_header.txt"));
        CHECK(first_line(oracle.str()) == golden("trajectory_header_n5.txt"));
    }

    TEST_CASE("csv numbers round-trip exactly")
    {
        for (double x : {0.1, 1.0 / 3.0, 2.0 / 7.0 * 1e-300, 6.02214076e23, -0.0, 5e-324}) {
            const std::string s = io::format_number(x);
            CHECK(std::strtod(s.c_str(), nullptr) == x);
        }
        CHECK(io::format_number(0.1) == "0.10000000000000001");
    }

    TEST_CASE("run writes the summary")
    {
        TempDir dir;
        const harness::RunResult r = harness::run(parse_config(base_config), dir.path);
        CHECK(std::filesystem::exists(dir.path / "trajectory.csv"));
        CHECK(std::filesystem::exists(dir.path / "energy.csv"));
        CHECK(r.dissipation_ok);
        CHECK(r.summary["drift"].get<double>() <= 1e-3);
        CHECK(r.summary["no_detachment"].get<bool>());
        CHECK(r.summary["contact_fraction"]["min"].get<double>() == 1.0);
    }

    TEST_CASE("experiment names")
    {
        for (auto e : {harness::Experiment::Adhesion, harness::Experiment::LongTime, harness::Experiment::Linearize,
                       harness::Experiment::Regularize, harness::Experiment::Examples})
            CHECK(harness::parse_experiment(harness::name(e)) == e);
        CHECK_FALSE(harness::parse_experiment("nope").has_value());
    }

    TEST_CASE("adhesion experiment on the textbook case")
    {
        TempDir dir;
        const std::string text = replace(replace(base_config, "\"kind\": \"smoothed\", \"eps\": 0.1", "\"kind\": \"exact\""),
                                         "\"u0\": 0.9", "\"u0\": 0.5");
        const nlohmann::json r = harness::experiment(harness::Experiment::Adhesion, parse_config(text), dir.path);
        CHECK(r["cases"][0]["hypothesis_met"].get<bool>());
        CHECK(r["cases"][0]["no_detachment"].get<bool>());
        CHECK(std::filesystem::exists(dir.path / "report.json"));
        CHECK(std::filesystem::exists(dir.path / "runs" / "configured_trajectory.csv"));
    }

    TEST_CASE("linearize experiment with zero data and skip reporting")
    {
        TempDir dir;
        const std::string zero = replace(base_config, "\"u0\": 0.9", "\"u0\": 0.0");
        const nlohmann::json r = harness::experiment(harness::Experiment::Linearize, parse_config(zero), dir.path);
        for (const auto& c : r["cases"]) CHECK(c["defect"].get<double>() == 0.0);

        const std::string high = replace(base_config, "\"u0\": 0.9", "\"u0\": 1.5");
        const nlohmann::json s = harness::experiment(harness::Experiment::Linearize, parse_config(high), dir.path);
        CHECK(s["skips"].size() == 1);
        CHECK(s["skips"][0]["case"] == "n1");
    }

    TEST_CASE("examples experiment skips when rho differs from one")
    {
        TempDir dir;
        const std::string text = replace(base_config, "\"rho\": 1.0", "\"rho\": 2.0");
        const nlohmann::json r = harness::experiment(harness::Experiment::Examples, parse_config(text), dir.path);
        CHECK(r["skips"].size() == 5);
        CHECK(r["cases"].empty());
    }
}
