#include "adbeam/io.hpp"

#include "adbeam/error.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace adbeam::io {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

void write_row(std::ostream& out, double t, const Grid& grid, std::span<const double> u)
{
    out << format_number(t);
    for (std::size_t i = 0; i < grid.n_points(); ++i) out << ',' << format_number(grid.x(i));
    for (double v : u) out << ',' << format_number(v);
    out << '\n';
}

} // namespace

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trajectory_header(std::size_t n_points)
{
    std::string h = "t";
    for (std::size_t i = 0; i < n_points; ++i) h += ",x_" + std::to_string(i);
    for (std::size_t i = 0; i < n_points; ++i) h += ",u_" + std::to_string(i);
    return h;
}

std::string energy_header() { return "t,kinetic,bending,adhesion,total,contact_fraction"; }

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory)
{
    out << trajectory_header(trajectory.grid.n_points()) << '\n';
    for (const BeamState& s : trajectory.states) write_row(out, s.time, trajectory.grid, s.displacement);
}

void write_energy_csv(std::ostream& out, const Trajectory& trajectory)
{
    out << energy_header() << '\n';
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        const EnergyBreakdown& e = trajectory.energies[k];
        out << format_number(trajectory.states[k].time) << ',' << format_number(e.kinetic) << ','
            << format_number(e.bending) << ',' << format_number(e.adhesion) << ',' << format_number(e.total) << ','
            << format_number(trajectory.contact_fraction[k]) << '\n';
    }
}

void write_oracle_csv(std::ostream& out, const oracles::OdeSeries& series, const Grid& grid)
{
    out << trajectory_header(grid.n_points()) << '\n';
    std::vector<double> u(grid.n_points());
    for (std::size_t k = 0; k < series.t.size(); ++k) {
        std::fill(u.begin(), u.end(), series.u[k]);
        write_row(out, series.t[k], grid, u);
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory)
{
    std::ofstream out = open_for_write(path);
    write_trajectory_csv(out, trajectory);
}

void write_energy_csv(const std::filesystem::path& path, const Trajectory& trajectory)
{
    std::ofstream out = open_for_write(path);
    write_energy_csv(out, trajectory);
}

void write_oracle_csv(const std::filesystem::path& path, const oracles::OdeSeries& series, const Grid& grid)
{
    std::ofstream out = open_for_write(path);
    write_oracle_csv(out, series, grid);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc)
{
    std::ofstream out = open_for_write(path);
    out << doc.dump(2) << '\n';
}

} // namespace adbeam::io
