#include "adbeam/analysis.hpp"
#include "adbeam/config.hpp"
#include "adbeam/dynamics.hpp"
#include "adbeam/error.hpp"
#include "adbeam/harness.hpp"
#include "adbeam/oracles.hpp"
#include "adbeam/potential.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace adbeam;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a)
{
    if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
    return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

template <class F>
Array map(const Array& in, F f)
{
    Array out(in.request().shape);
    const double* src = in.data();
    double* dst = out.mutable_data();
    for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = f(src[i]);
    return out;
}

py::dict trajectory_dict(const Trajectory& tr)
{
    const std::size_t rows = tr.states.size();
    const std::size_t n = tr.grid.n_points();
    Array t(static_cast<py::ssize_t>(rows));
    Array u({rows, n});
    Array v({rows, n});
    Array kin(static_cast<py::ssize_t>(rows)), bend(static_cast<py::ssize_t>(rows)),
        adh(static_cast<py::ssize_t>(rows)), total(static_cast<py::ssize_t>(rows));
    auto tu = u.mutable_unchecked<2>();
    auto tv = v.mutable_unchecked<2>();
    for (std::size_t r = 0; r < rows; ++r) {
        t.mutable_at(r) = tr.states[r].time;
        for (std::size_t i = 0; i < n; ++i) {
            tu(r, i) = tr.states[r].displacement[i];
            tv(r, i) = tr.states[r].velocity[i];
        }
        kin.mutable_at(r) = tr.energies[r].kinetic;
        bend.mutable_at(r) = tr.energies[r].bending;
        adh.mutable_at(r) = tr.energies[r].adhesion;
        total.mutable_at(r) = tr.energies[r].total;
    }
    py::dict d;
    d["x"] = to_array(tr.grid.coordinates());
    d["t"] = t;
    d["u"] = u;
    d["v"] = v;
    d["kinetic"] = kin;
    d["bending"] = bend;
    d["adhesion"] = adh;
    d["total"] = total;
    d["contact_fraction"] = to_array(tr.contact_fraction);
    d["dt"] = tr.dt;
    d["steps"] = tr.steps;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Adhesive beam core";

    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<StabilityError>(m, "StabilityError", PyExc_ValueError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<BeamParams>(m, "BeamParams")
        .def(py::init([](double rho, double mu, double length) {
                 BeamParams p{rho, mu, length};
                 p.validate();
                 return p;
             }),
             py::arg("rho") = 1.0, py::arg("mu") = 1.0, py::arg("length") = 1.0)
        .def_readonly("rho", &BeamParams::rho)
        .def_readonly("mu", &BeamParams::mu)
        .def_readonly("length", &BeamParams::length);

    py::class_<Grid>(m, "Grid")
        .def(py::init<double, std::size_t>(), py::arg("length"), py::arg("n_points"))
        .def_property_readonly("n_points", &Grid::n_points)
        .def_property_readonly("length", &Grid::length)
        .def_property_readonly("spacing", &Grid::spacing)
        .def("coordinates", [](const Grid& g) { return to_array(g.coordinates()); });

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def_static("exact", &PotentialSpec::exact, py::arg("selection_at_one") = 0.0)
        .def_static("smoothed", &PotentialSpec::smoothed, py::arg("eps"))
        .def_property_readonly("is_smoothed",
                               [](const PotentialSpec& s) { return s.kind == PotentialKind::SmoothedEps; })
        .def_readonly("eps", &PotentialSpec::eps)
        .def_readonly("kappa", &PotentialSpec::kappa)
        .def_readonly("selection_at_one", &PotentialSpec::selection_at_one);

    m.def("eval_phi", [](const PotentialSpec& s, double u) { return eval_phi(s, u); }, py::arg("potential"), py::arg("u"));
    m.def("eval_phi", [](const PotentialSpec& s, const Array& u) { return map(u, [&](double x) { return eval_phi(s, x); }); });
    m.def("select_h", [](const PotentialSpec& s, double u) { return select_h(s, u); }, py::arg("potential"), py::arg("u"));
    m.def("select_h", [](const PotentialSpec& s, const Array& u) { return map(u, [&](double x) { return select_h(s, x); }); });
    m.def("smoothing_residual", &smoothing_residual, py::arg("eps"));

    m.def(
        "apply_biharmonic",
        [](const BeamParams& p, const Grid& g, const Array& u) {
            return to_array(apply_biharmonic(p, g, to_vector(u)));
        },
        py::arg("params"), py::arg("grid"), py::arg("u"));
    m.def("discrete_frequencies", &discrete_frequencies, py::arg("params"), py::arg("grid"), py::arg("count"));
    m.def("stability_limit", &stability_limit, py::arg("params"), py::arg("grid"));

    m.def(
        "energy",
        [](const BeamParams& p, const Grid& g, const std::optional<PotentialSpec>& s, const Array& u,
           const Array& v) {
            const EnergyBreakdown e = energy(p, g, s, BeamState{0.0, to_vector(u), to_vector(v)});
            py::dict d;
            d["kinetic"] = e.kinetic;
            d["bending"] = e.bending;
            d["adhesion"] = e.adhesion;
            d["total"] = e.total;
            return d;
        },
        py::arg("params"), py::arg("grid"), py::arg("potential"), py::arg("u"), py::arg("v"));

    m.def(
        "simulate",
        [](const BeamParams& p, const std::optional<PotentialSpec>& s, const Array& u0, const Array& u1,
           double horizon, std::optional<double> dt, std::size_t record_stride) {
            Simulation sim;
            sim.params = p;
            sim.potential = s;
            sim.u0 = to_vector(u0);
            sim.u1 = to_vector(u1);
            sim.n_points = sim.u0.size();
            sim.horizon = horizon;
            sim.dt = dt;
            sim.record_stride = record_stride;
            Trajectory tr;
            {
                py::gil_scoped_release release;
                tr = simulate(sim);
            }
            return trajectory_dict(tr);
        },
        py::arg("params"), py::arg("potential"), py::arg("u0"), py::arg("u1"), py::arg("horizon"),
        py::arg("dt") = py::none(), py::arg("record_stride") = 1);

    m.def("adhesion_threshold", &adhesion_threshold, py::arg("kappa"), py::arg("mu"));
    m.def(
        "adhesion_check",
        [](const BeamParams& p, const Grid& g, const PotentialSpec& s, const Array& u0, const Array& u1) {
            const AdhesionVerdict v = adhesion_check(p, g, s, to_vector(u0), to_vector(u1));
            py::dict d;
            d["sup_norm_u0"] = v.sup_norm_u0;
            d["initial_energy"] = v.initial_energy;
            d["threshold"] = v.threshold;
            d["hypothesis_met"] = v.hypothesis_met;
            return d;
        },
        py::arg("params"), py::arg("grid"), py::arg("potential"), py::arg("u0"), py::arg("u1"));

    py::enum_<oracles::ClosedFormId>(m, "ClosedForm")
        .value("SMOOTHED_OSCILLATING", oracles::ClosedFormId::SmoothedOscillating)
        .value("SMOOTHED_RESTING", oracles::ClosedFormId::SmoothedResting)
        .value("CAPPED_ESCAPING", oracles::ClosedFormId::CappedEscaping)
        .value("CAPPED_OSCILLATING", oracles::ClosedFormId::CappedOscillating)
        .value("CAPPED_KINK", oracles::ClosedFormId::CappedKink);
    m.def(
        "eval_closed_form",
        [](oracles::ClosedFormId id, double eps, double t) {
            const oracles::ScalarState s = oracles::eval_closed_form(id, eps, t);
            return py::make_tuple(s.u, s.v);
        },
        py::arg("id"), py::arg("eps"), py::arg("t"));
    m.def("closed_form_energy", &oracles::closed_form_energy, py::arg("id"), py::arg("eps"), py::arg("length"));
    m.def("kink_time", &oracles::kink_time);
    m.def(
        "uniform_ode_oracle",
        [](const PotentialSpec& s, double rho, double u0, double v0, double horizon, double sample_dt) {
            const oracles::OdeSeries o = oracles::uniform_ode_oracle(s, rho, u0, v0, horizon, sample_dt);
            py::dict d;
            d["t"] = to_array(o.t);
            d["u"] = to_array(o.u);
            d["v"] = to_array(o.v);
            d["events"] = to_array(o.events);
            return d;
        },
        py::arg("potential"), py::arg("rho"), py::arg("u0"), py::arg("v0"), py::arg("horizon"),
        py::arg("sample_dt"));
    m.def("free_free_roots", &oracles::free_free_roots, py::arg("count"));
    m.def("free_free_frequencies", &oracles::free_free_frequencies, py::arg("params"), py::arg("count"));

    m.def("_parse_config", [](const std::string& text, const std::string& base) {
        return to_json(parse_config(text, base)).dump();
    });
    m.def("_run", [](const std::string& config, const std::string& out) {
        return harness::run(load_config(config), out).summary.dump();
    });
    m.def("_experiment", [](const std::string& name, const std::string& config, const std::string& out) {
        const auto e = harness::parse_experiment(name);
        if (!e) throw py::value_error("unknown experiment: " + name);
        return harness::experiment(*e, load_config(config), out).dump();
    });
}
