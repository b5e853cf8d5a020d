#include "adbeam/config.hpp"

#include "adbeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace adbeam {

using nlohmann::json;

namespace {

std::size_t line_at_offset(const std::string& text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Reads typed fields out of the parsed document and reports failures
/// against the line where the key appears in the source text.
class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    /// Line of the key path (e.g. {"potential", "eps"}), found by scanning
    /// for each quoted key in order. 0 if absent.
    std::size_t line_of(std::initializer_list<std::string_view> path) const
    {
        std::size_t pos = 0;
        for (std::string_view key : path) {
            const std::string quoted = "\"" + std::string(key) + "\"";
            const std::size_t found = text_.find(quoted, pos);
            if (found == std::string::npos) return 0;
            pos = found + quoted.size();
        }
        return line_at_offset(text_, pos);
    }

    [[noreturn]] void fail(std::initializer_list<std::string_view> path, const std::string& what) const
    {
        throw ConfigError(what, line_of(path));
    }

    double number(const json& obj, std::initializer_list<std::string_view> path) const
    {
        const json& v = obj.at(std::string(*(path.end() - 1)));
        if (!v.is_number()) fail(path, dotted(path) + " must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(path, dotted(path) + " must be finite");
        return x;
    }

    double positive(const json& obj, std::initializer_list<std::string_view> path) const
    {
        const double x = number(obj, path);
        if (!(x > 0.0)) fail(path, dotted(path) + " must be positive");
        return x;
    }

    long long integer(const json& obj, std::initializer_list<std::string_view> path) const
    {
        const json& v = obj.at(std::string(*(path.end() - 1)));
        if (!v.is_number_integer()) fail(path, dotted(path) + " must be an integer");
        return v.get<long long>();
    }

    std::string string(const json& obj, std::initializer_list<std::string_view> path) const
    {
        const json& v = obj.at(std::string(*(path.end() - 1)));
        if (!v.is_string()) fail(path, dotted(path) + " must be a string");
        return v.get<std::string>();
    }

    const json& object(const json& obj, std::initializer_list<std::string_view> path) const
    {
        const std::string key(*(path.end() - 1));
        if (!obj.contains(key)) fail(path, "missing " + dotted(path));
        const json& v = obj.at(key);
        if (!v.is_object()) fail(path, dotted(path) + " must be an object");
        return v;
    }

    void require(const json& obj, std::initializer_list<std::string_view> path) const
    {
        if (!obj.contains(std::string(*(path.end() - 1)))) {
            std::size_t line = 0;
            if (path.size() > 1) line = line_of({*path.begin()});
            throw ConfigError("missing " + dotted(path), line);
        }
    }

    void only(const json& obj, std::initializer_list<std::string_view> parent, const std::set<std::string>& allowed) const
    {
        for (const auto& [key, value] : obj.items()) {
            if (allowed.count(key)) continue;
            std::vector<std::string_view> p(parent.begin(), parent.end());
            std::size_t line = 0;
            const std::string quoted = "\"" + key + "\"";
            const std::size_t at = text_.find(quoted, parent.size() ? text_.find("\"" + std::string(*(parent.end() - 1)) + "\"") : 0);
            if (at != std::string::npos) line = line_at_offset(text_, at);
            throw ConfigError("unknown key \"" + key + "\"", line);
        }
    }

    static std::string dotted(std::initializer_list<std::string_view> path)
    {
        std::string s;
        for (std::string_view k : path) {
            if (!s.empty()) s += '.';
            s += k;
        }
        return s;
    }

private:
    const std::string& text_;
};

PotentialSpec read_potential(const Reader& r, const json& p)
{
    r.only(p, {"potential"}, {"kind", "eps", "selection_at_one"});
    r.require(p, {"potential", "kind"});
    const std::string kind = r.string(p, {"potential", "kind"});
    if (kind == "exact") {
        double sel = 0.0;
        if (p.contains("selection_at_one")) sel = r.number(p, {"potential", "selection_at_one"});
        if (!(sel >= 0.0 && sel <= 2.0))
            r.fail({"potential", "selection_at_one"}, "potential.selection_at_one must lie in [0, 2]");
        return PotentialSpec::exact(sel);
    }
    if (kind == "smoothed") {
        r.require(p, {"potential", "eps"});
        const double eps = r.number(p, {"potential", "eps"});
        if (!(eps > 0.0 && eps < 2.0)) r.fail({"potential", "eps"}, "potential.eps must lie in (0, 2)");
        return PotentialSpec::smoothed(eps);
    }
    r.fail({"potential", "kind"}, "potential.kind must be \"exact\" or \"smoothed\", got \"" + kind + "\"");
}

InitialSpec read_initial(const Reader& r, const json& j)
{
    r.require(j, {"initial", "type"});
    const std::string type = r.string(j, {"initial", "type"});
    if (type == "uniform") {
        r.only(j, {"initial"}, {"type", "u0", "v0"});
        UniformData d;
        if (j.contains("u0")) d.u0 = r.number(j, {"initial", "u0"});
        if (j.contains("v0")) d.v0 = r.number(j, {"initial", "v0"});
        return d;
    }
    if (type == "cosine") {
        r.only(j, {"initial"}, {"type", "amplitude", "mode"});
        CosineData d;
        r.require(j, {"initial", "amplitude"});
        d.amplitude = r.number(j, {"initial", "amplitude"});
        if (j.contains("mode")) {
            const long long mode = r.integer(j, {"initial", "mode"});
            if (mode < 0 || mode > 1000) r.fail({"initial", "mode"}, "initial.mode must lie in [0, 1000]");
            d.mode = static_cast<int>(mode);
        }
        return d;
    }
    if (type == "file") {
        r.only(j, {"initial"}, {"type", "path"});
        r.require(j, {"initial", "path"});
        return FileData{r.string(j, {"initial", "path"})};
    }
    r.fail({"initial", "type"}, "initial.type must be \"uniform\", \"cosine\" or \"file\", got \"" + type + "\"");
}

HarnessOptions read_harness(const Reader& r, const json& h)
{
    r.only(h, {"harness"},
           {"eps", "eps_list", "scales", "window", "random_cases", "max_sup", "max_energy", "family"});
    HarnessOptions o;
    if (h.contains("eps")) o.eps = r.positive(h, {"harness", "eps"});
    if (h.contains("eps_list")) {
        const json& list = h.at("eps_list");
        if (!list.is_array() || list.empty()) r.fail({"harness", "eps_list"}, "harness.eps_list must be a non-empty array");
        std::vector<double> eps;
        for (const json& e : list) {
            if (!e.is_number() || !(e.get<double>() > 0.0 && e.get<double>() < 2.0))
                r.fail({"harness", "eps_list"}, "harness.eps_list entries must lie in (0, 2)");
            eps.push_back(e.get<double>());
        }
        for (std::size_t k = 1; k < eps.size(); ++k)
            if (!(eps[k] < eps[k - 1])) r.fail({"harness", "eps_list"}, "harness.eps_list must be strictly decreasing");
        o.eps_list = eps;
    }
    if (h.contains("scales")) {
        const json& list = h.at("scales");
        if (!list.is_array() || list.empty()) r.fail({"harness", "scales"}, "harness.scales must be a non-empty array");
        std::vector<int> scales;
        for (const json& s : list) {
            if (!s.is_number_integer() || s.get<long long>() < 1 || s.get<long long>() > 1000000)
                r.fail({"harness", "scales"}, "harness.scales entries must be positive integers");
            scales.push_back(s.get<int>());
        }
        o.scales = scales;
    }
    if (h.contains("window")) {
        const json& w = h.at("window");
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number() ||
            !(w[0].get<double>() < w[1].get<double>()))
            r.fail({"harness", "window"}, "harness.window must be [begin, end] with begin < end");
        o.window = TimeWindow{w[0].get<double>(), w[1].get<double>()};
    }
    if (h.contains("random_cases")) {
        const long long n = r.integer(h, {"harness", "random_cases"});
        if (n < 0 || n > 10000) r.fail({"harness", "random_cases"}, "harness.random_cases must lie in [0, 10000]");
        o.random_cases = static_cast<int>(n);
    }
    if (h.contains("max_sup")) {
        const double s = r.positive(h, {"harness", "max_sup"});
        if (!(s < 1.0)) r.fail({"harness", "max_sup"}, "harness.max_sup must lie in (0, 1)");
        o.max_sup = s;
    }
    if (h.contains("max_energy")) o.max_energy = r.positive(h, {"harness", "max_energy"});
    if (h.contains("family")) {
        const std::string f = r.string(h, {"harness", "family"});
        if (f != "scaled" && f != "high_frequency" && f != "fixed" && f != "below_one")
            r.fail({"harness", "family"},
                   "harness.family must be one of \"scaled\", \"high_frequency\", \"fixed\", \"below_one\"");
        o.family = f;
    }
    return o;
}

} // namespace

SimConfig parse_config(const std::string& text, const std::filesystem::path& base_dir)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what(), line_at_offset(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    const Reader r(text);
    if (!doc.is_object()) throw ConfigError("top level must be an object", 1);
    r.only(doc, {}, {"params", "grid", "potential", "initial", "horizon", "dt", "record_stride", "seed", "harness"});

    SimConfig c;
    c.base_dir = base_dir;
    try {
        const json& params = r.object(doc, {"params"});
        r.only(params, {"params"}, {"rho", "mu", "length"});
        if (params.contains("rho")) c.params.rho = r.positive(params, {"params", "rho"});
        if (params.contains("mu")) c.params.mu = r.positive(params, {"params", "mu"});
        if (params.contains("length")) c.params.length = r.positive(params, {"params", "length"});

        const json& grid = r.object(doc, {"grid"});
        r.only(grid, {"grid"}, {"n_points"});
        r.require(grid, {"grid", "n_points"});
        const long long n = r.integer(grid, {"grid", "n_points"});
        if (n < static_cast<long long>(Grid::min_points) || n > 1000000)
            r.fail({"grid", "n_points"}, "grid.n_points must lie in [5, 1000000]");
        c.n_points = static_cast<std::size_t>(n);

        c.potential = read_potential(r, r.object(doc, {"potential"}));
        c.initial = read_initial(r, r.object(doc, {"initial"}));

        r.require(doc, {"horizon"});
        c.horizon = r.positive(doc, {"horizon"});

        if (doc.contains("dt")) {
            const json& dt = doc.at("dt");
            if (dt.is_string()) {
                if (dt.get<std::string>() != "auto") r.fail({"dt"}, "dt must be \"auto\" or a positive number");
            } else {
                c.dt = r.positive(doc, {"dt"});
                const double limit = stability_limit(c.params, Grid(c.params.length, c.n_points));
                if (*c.dt > limit) {
                    std::ostringstream os;
                    os.precision(17);
                    os << "dt = " << *c.dt << " exceeds the stability limit " << limit;
                    r.fail({"dt"}, os.str());
                }
            }
        }
        if (doc.contains("record_stride")) {
            const long long s = r.integer(doc, {"record_stride"});
            if (s < 1) r.fail({"record_stride"}, "record_stride must be at least 1");
            c.record_stride = static_cast<std::size_t>(s);
        }
        if (doc.contains("seed")) {
            const json& s = doc.at("seed");
            if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
                r.fail({"seed"}, "seed must be a non-negative integer");
            c.seed = s.get<std::uint64_t>();
        }
        if (doc.contains("harness")) c.harness = read_harness(r, r.object(doc, {"harness"}));
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
    return c;
}

SimConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

json to_json(const PotentialSpec& spec)
{
    if (spec.kind == PotentialKind::SmoothedEps) return {{"kind", "smoothed"}, {"eps", spec.eps}};
    return {{"kind", "exact"}, {"selection_at_one", spec.selection_at_one}};
}

PotentialSpec potential_from_json(const json& j)
{
    const std::string text = j.dump();
    return read_potential(Reader(text), j);
}

json to_json(const SimConfig& c)
{
    json j;
    j["params"] = {{"rho", c.params.rho}, {"mu", c.params.mu}, {"length", c.params.length}};
    j["grid"] = {{"n_points", c.n_points}};
    j["potential"] = to_json(c.potential);
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformData>)
                j["initial"] = {{"type", "uniform"}, {"u0", d.u0}, {"v0", d.v0}};
            else if constexpr (std::is_same_v<T, CosineData>)
                j["initial"] = {{"type", "cosine"}, {"amplitude", d.amplitude}, {"mode", d.mode}};
            else
                j["initial"] = {{"type", "file"}, {"path", d.path}};
        },
        c.initial);
    j["horizon"] = c.horizon;
    if (c.dt)
        j["dt"] = *c.dt;
    else
        j["dt"] = "auto";
    j["record_stride"] = c.record_stride;
    j["seed"] = c.seed;

    json h = json::object();
    const HarnessOptions& o = c.harness;
    if (o.eps) h["eps"] = *o.eps;
    if (o.eps_list) h["eps_list"] = *o.eps_list;
    if (o.scales) h["scales"] = *o.scales;
    if (o.window) h["window"] = {o.window->begin, o.window->end};
    if (o.random_cases) h["random_cases"] = *o.random_cases;
    if (o.max_sup) h["max_sup"] = *o.max_sup;
    if (o.max_energy) h["max_energy"] = *o.max_energy;
    if (o.family) h["family"] = *o.family;
    if (!h.empty()) j["harness"] = h;
    return j;
}

namespace {

InitialData read_data_file(const SimConfig& c, const FileData& f)
{
    std::filesystem::path path(f.path);
    if (path.is_relative() && !c.base_dir.empty()) path = c.base_dir / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("initial.path: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ConfigError("initial.path: empty file " + path.string());
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            header.push_back(cell);
        }
    }
    const auto col = [&](const std::string& name) -> std::ptrdiff_t {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : it - header.begin();
    };
    const std::ptrdiff_t cu = col("u0");
    const std::ptrdiff_t cv = col("u1");
    if (cu < 0 || cv < 0) throw ConfigError(path.string() + ":1: header must name columns u0 and u1");

    InitialData d;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                cells.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": not a number: " + cell);
            }
        }
        if (cells.size() != header.size())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(header.size()) + " columns");
        d.u0.push_back(cells[static_cast<std::size_t>(cu)]);
        d.u1.push_back(cells[static_cast<std::size_t>(cv)]);
    }
    if (d.u0.size() != c.n_points)
        throw ConfigError("initial.path: " + path.string() + " holds " + std::to_string(d.u0.size()) +
                          " rows but grid.n_points is " + std::to_string(c.n_points));
    return d;
}

} // namespace

InitialData build_initial_data(const SimConfig& c)
{
    const Grid grid(c.params.length, c.n_points);
    return std::visit(
        [&](const auto& spec) -> InitialData {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, UniformData>) {
                return {std::vector<double>(c.n_points, spec.u0), std::vector<double>(c.n_points, spec.v0)};
            } else if constexpr (std::is_same_v<T, CosineData>) {
                InitialData d{std::vector<double>(c.n_points), std::vector<double>(c.n_points, 0.0)};
                const double k = spec.mode * std::numbers::pi / c.params.length;
                for (std::size_t i = 0; i < c.n_points; ++i) d.u0[i] = spec.amplitude * std::cos(k * grid.x(i));
                return d;
            } else {
                return read_data_file(c, spec);
            }
        },
        c.initial);
}

Simulation build_simulation(const SimConfig& c)
{
    Simulation sim;
    sim.params = c.params;
    sim.n_points = c.n_points;
    sim.potential = c.potential;
    InitialData d = build_initial_data(c);
    sim.u0 = std::move(d.u0);
    sim.u1 = std::move(d.u1);
    sim.horizon = c.horizon;
    sim.dt = c.dt;
    sim.record_stride = c.record_stride;
    return sim;
}

} // namespace adbeam
