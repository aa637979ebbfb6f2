// Copyright 2026 The PhononGate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phonongate/csv.hpp"
#include "phonongate/duffing.hpp"
#include "phonongate/error.hpp"
#include "phonongate/fidelity.hpp"
#include "phonongate/gates.hpp"
#include "phonongate/hamiltonians.hpp"
#include "phonongate/scenario.hpp"

namespace py = pybind11;
using namespace phonongate;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Phononic CNOT gate simulator";

    // Messages carry the kebab-case error code as a prefix.
    py::register_exception<Error>(m, "PhononGateError", PyExc_RuntimeError);

    py::class_<DuffingSpectrum>(m, "DuffingSpectrum")
        .def_readonly("dim", &DuffingSpectrum::dim)
        .def_readonly("dim_trust", &DuffingSpectrum::dim_trust)
        .def_readonly("energies", &DuffingSpectrum::energies)
        .def_readonly("eigvecs", &DuffingSpectrum::eigvecs)
        .def_readonly("x", &DuffingSpectrum::x)
        .def_readonly("x2", &DuffingSpectrum::x2);
    py::class_<QubitSubspace>(m, "QubitSubspace")
        .def_readonly("omega_q", &QubitSubspace::omega_q)
        .def_readonly("x10", &QubitSubspace::x10)
        .def_readonly("x11", &QubitSubspace::x11)
        .def_readonly("z_coeff", &QubitSubspace::z_coeff);

    m.def("duffing_spectrum", &duffing_spectrum, py::arg("omega_m"), py::arg("lam"), py::arg("dim") = 16,
          py::arg("dim_trust") = 4);
    m.def("qubit_subspace", &qubit_subspace);
    m.def("rabi_rate", &rabi_rate, py::arg("Delta"), py::arg("g_G"), py::arg("omega_G"), py::arg("x_g"));

    m.def("exchange_unitary", [](double omega, double t) { return exchange_unitary(omega, t).data(); });
    m.def("cnot_sequence", [](double omega, double t) { return cnot_sequence(omega, t).data(); });
    m.def("ideal_cnot", [] { return ideal_cnot().data(); });
    m.def("phase_aligned_distance", py::overload_cast<const Matrix &, const Matrix &>(&phase_aligned_distance));

    m.def("gate_fidelity_closed", &gate_fidelity_closed, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"),
          py::arg("omega_t"));
    m.def("gate_fidelity_matrix", [](const Vector &psi, const Matrix &u) {
        return gate_fidelity_matrix(psi, GateMatrix(u));
    });
    m.def("avg_fidelity_entangled", &avg_fidelity_entangled);
    m.def("avg_fidelity_separable", &avg_fidelity_separable);

    m.def("preset_names", &preset_names);
    m.def("figure_ids", &figure_ids);
    m.def("preset_document", [](const std::string &name) { return preset_document(name).dump(); });
    m.def("figure_document", [](const std::string &id) { return figure_document(id).dump(); });

    // Runs a scenario given as JSON text; returns (header, rows, summary JSON text).
    m.def(
        "run_scenario",
        [](const std::string &config, int jobs) {
            ScenarioConfig c = parse_config(nlohmann::json::parse(config));
            RunResult r = [&] {
                py::gil_scoped_release release;
                return run_scenario(c, jobs);
            }();
            CsvTable table = r.trajectory.to_table();
            return py::make_tuple(table.header, table.rows, r.summary.dump());
        },
        py::arg("config"), py::arg("jobs") = 1);
}
