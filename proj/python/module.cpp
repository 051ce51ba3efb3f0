#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcprop/config.hpp"
#include "qcprop/exact.hpp"
#include "qcprop/runner.hpp"
#include "qcprop/semiclassics.hpp"
#include "qcprop/validate.hpp"

namespace py = pybind11;
using namespace qcprop;

namespace {

PhaseSpaceGeometry make_geometry(const std::string& kind, double weight) {
    return parse_geometry(json{{"kind", kind}, {"weight", weight}});
}

HamiltonianSpec hamiltonian_from_json(const PhaseSpaceGeometry& g, const std::string& terms_json) {
    return parse_hamiltonian(json::parse(terms_json), algebra_for(g.kind));
}

py::dict breakdown_dict(const ActionBreakdown& a) {
    py::dict d;
    d["S_kin"] = a.S_kin;
    d["S_dyn"] = a.S_dyn;
    d["Gamma"] = a.Gamma;
    d["Phi_c"] = a.Phi_c;
    d["B_int"] = a.B_int;
    d["winding"] = a.winding;
    return d;
}

py::dict result_dict(const PropagatorResult& r) {
    py::dict d;
    d["amplitude"] = r.amplitude;
    d["prefactor"] = r.prefactor;
    d["reduced"] = r.reduced;
    d["branch"] = r.branch;
    d["action"] = breakdown_dict(r.breakdown);
    py::dict diag;
    for (const auto& [k, v] : r.diagnostics) diag[py::str(k)] = v;
    d["diagnostics"] = diag;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quasiclassical coherent-state propagator engine";

    py::class_<PhaseSpaceGeometry>(m, "PhaseSpaceGeometry")
        .def_readonly("weight", &PhaseSpaceGeometry::weight)
        .def("__repr__", [](const PhaseSpaceGeometry& g) {
            const char* k = g.kind == SpaceKind::Sphere ? "sphere"
                          : g.kind == SpaceKind::Plane ? "plane" : "disk";
            return "PhaseSpaceGeometry(" + std::string(k) + ", weight=" + std::to_string(g.weight) + ")";
        });
    m.def("geometry", &make_geometry, py::arg("kind"), py::arg("weight"),
          "phase space from kind ('sphere'|'plane'|'disk') and weight");

    py::class_<HamiltonianSpec>(m, "HamiltonianSpec");
    m.def("hamiltonian", &hamiltonian_from_json, py::arg("geometry"), py::arg("terms_json"),
          "Hamiltonian from a JSON list of term records");
    m.def("su2_linear", &su2_linear_spec, py::arg("A"), py::arg("f"));
    m.def("oscillator", &oscillator_spec, py::arg("omega"));
    m.def("parametric_amplifier", &parametric_amplifier_spec, py::arg("omega"), py::arg("g"));
    m.def("su2_quadratic", &su2_quadratic_spec);

    py::class_<BoundaryData>(m, "BoundaryData")
        .def(py::init([](cplx z_I, cplx zbar_F, double tau) {
                 return BoundaryData{z_I, zbar_F, tau};
             }),
             py::arg("z_I"), py::arg("zbar_F"), py::arg("tau"))
        .def_readwrite("z_I", &BoundaryData::z_I)
        .def_readwrite("zbar_F", &BoundaryData::zbar_F)
        .def_readwrite("tau", &BoundaryData::tau);

    py::class_<SolverSettings>(m, "SolverSettings")
        .def(py::init<>())
        .def_readwrite("steps", &SolverSettings::steps)
        .def_readwrite("tol", &SolverSettings::tol)
        .def_readwrite("newton_max", &SolverSettings::newton_max)
        .def_readwrite("rmax", &SolverSettings::rmax)
        .def_readwrite("probe_roots", &SolverSettings::probe_roots);

    m.def("kahler_potential", &kahler_potential, py::arg("geometry"), py::arg("zbar1"), py::arg("z2"));
    m.def("metric", &metric, py::arg("geometry"), py::arg("zbar"), py::arg("z"));
    m.def("overlap", &overlap, py::arg("geometry"), py::arg("z1"), py::arg("z2"));
    m.def("liouville_density", &liouville_density, py::arg("geometry"), py::arg("z"));

    m.def(
        "covariant_symbol",
        [](const PhaseSpaceGeometry& g, const HamiltonianSpec& h, cplx zbar, cplx z, double t) {
            const SymbolValue v = covariant_symbol(h, g, zbar, z, t);
            py::dict d;
            d["value"] = v.value;
            d["dz"] = v.dz;
            d["dzbar"] = v.dzbar;
            return d;
        },
        py::arg("geometry"), py::arg("hamiltonian"), py::arg("zbar"), py::arg("z"),
        py::arg("t") = 0.0);

    m.def(
        "solve_trajectory",
        [](const PhaseSpaceGeometry& g, const HamiltonianSpec& h, const BoundaryData& bd,
           const SolverSettings& st) {
            const SymbolEvaluator sym(g, h);
            const ClassicalTrajectory t = solve_trajectory(sym, bd, st);
            py::dict d;
            d["grid"] = t.grid;
            d["z_path"] = t.z_path;
            d["zbar_path"] = t.zbar_path;
            d["sens_zI"] = t.sens_zI;
            d["sens_zbarF"] = t.sens_zbarF;
            d["residual"] = t.residual;
            d["solver"] = t.solver_tag;
            return d;
        },
        py::arg("geometry"), py::arg("hamiltonian"), py::arg("boundary"),
        py::arg("settings") = SolverSettings{});

    m.def(
        "propagator_qc",
        [](const PhaseSpaceGeometry& g, const HamiltonianSpec& h, const BoundaryData& bd,
           const SolverSettings& st) { return result_dict(propagator_qc(g, h, bd, st)); },
        py::arg("geometry"), py::arg("hamiltonian"), py::arg("boundary"),
        py::arg("settings") = SolverSettings{});

    m.def(
        "propagator_flat_alpha",
        [](const PhaseSpaceGeometry& g, const HamiltonianSpec& h, const BoundaryData& bd,
           double alpha, const SolverSettings& st) {
            return result_dict(propagator_flat_alpha(g, h, bd, alpha, st));
        },
        py::arg("geometry"), py::arg("hamiltonian"), py::arg("boundary"), py::arg("alpha"),
        py::arg("settings") = SolverSettings{});

    m.def(
        "exact_amplitude",
        [](const PhaseSpaceGeometry& g, const HamiltonianSpec& h, cplx z_I, cplx z_F, double tau,
           int nmax) {
            return exact_amplitude(representation_for(g, nmax), h, z_I, z_F, tau);
        },
        py::arg("geometry"), py::arg("hamiltonian"), py::arg("z_I"), py::arg("z_F"),
        py::arg("tau"), py::arg("nmax") = 0);

    m.def("run_propagate_json", [](const std::string& config) {
        const ResultRecord r = run_propagate(parse_config(json::parse(config)));
        return record_to_json(r).dump();
    });

    m.def("validate_acceptance", [] {
        py::list out;
        for (const auto& c : run_acceptance_criteria()) {
            py::dict d;
            d["name"] = c.name;
            d["pass"] = c.pass;
            d["measured"] = c.measured;
            d["threshold"] = c.threshold;
            out.append(d);
        }
        return out;
    });

    py::register_exception<Error>(m, "QcpropError");
}
