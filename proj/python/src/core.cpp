#include "adaptrom/adaptive.hpp"
#include "adaptrom/errors.hpp"
#include "adaptrom/harness.hpp"
#include "adaptrom/io.hpp"
#include "adaptrom/pod.hpp"

#include <json.hpp>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace adaptrom;
using nlohmann::json;

namespace {

ExperimentConfig parse_config(const std::string& text) { return ExperimentConfig::from_json(json::parse(text)); }

OfflineBasis offline_for(const ExperimentConfig& config) { return build_offline(config, build_snapshots(config)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adaptive-basis reduced-order models";

    // Held for the lifetime of the interpreter; the translator runs with the GIL.
    static PyObject* error = py::exception<Error>(m, "AdaptromError", PyExc_RuntimeError).inc_ref().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error, (e.kind() + ": " + e.what()).c_str());
        }
    });

    m.def(
        "pod",
        [](const Matrix& snapshots, bool mean_subtract) {
            SnapshotMatrix s;
            s.data = snapshots;
            const PodBasis basis = pod_compute(s, mean_subtract);
            return py::make_tuple(basis.vectors, basis.singular_values);
        },
        py::arg("snapshots"), py::arg("mean_subtract") = false,
        "POD vectors and singular values of a snapshot matrix (columns are snapshots).");

    m.def("select_rows", &select_rows, py::arg("residual"), py::arg("n_sel"),
          "Indices of the n_sel largest |r_i|, ties broken by lower index.");

    m.def(
        "local_additional_basis",
        [](const Matrix& phi, const Vector& q, const Matrix& jacobian, const Vector& residual, Index n_sel) {
            RomState rom(phi, Vector::Zero(phi.rows()));
            rom.set_coordinates(q);
            const SparseMatrix j = jacobian.sparseView();
            const auto local = local_operators(j, residual, select_rows(residual, n_sel));
            return additional_basis_local(rom, local, false).additional;
        },
        py::arg("phi"), py::arg("q"), py::arg("jacobian"), py::arg("residual"), py::arg("n_sel"),
        "Local-opt additional basis Psi from the n_sel selected residual rows.");

    m.def(
        "from_additional_basis",
        [](const Matrix& jacobian, const Vector& residual) {
            return additional_basis_from(SparseMatrix(jacobian.sparseView()), residual);
        },
        py::arg("jacobian"), py::arg("residual"), "F-ROM additional basis: the column solving J psi = r.");

    m.def(
        "extend_and_orthonormalize",
        [](const Matrix& phi, const Matrix& psi, double drop_tol) {
            const auto r = extend_and_orthonormalize(phi, psi, drop_tol);
            return py::make_tuple(r.basis, r.added);
        },
        py::arg("phi"), py::arg("psi"), py::arg("drop_tol") = 1e-10,
        "Orthonormal extension of phi by psi; returns (basis, columns added).");

    m.def(
        "write_romx", [](const std::string& path, const Matrix& m) { write_matrix(path, m); }, py::arg("path"),
        py::arg("matrix"));
    m.def(
        "read_romx", [](const std::string& path) { return read_matrix(path); }, py::arg("path"));

    m.def(
        "validate_config", [](const std::string& text) { parse_config(text).validate(); }, py::arg("config_json"),
        "Raises AdaptromError on an unusable configuration.");

    m.def(
        "build_snapshots",
        [](const std::string& text) {
            const auto config = parse_config(text);
            config.validate();
            py::gil_scoped_release release;
            return build_snapshots(config).data;
        },
        py::arg("config_json"), "Snapshot matrix for an experiment configuration.");

    m.def(
        "run",
        [](const std::string& text) {
            const auto config = parse_config(text);
            config.validate();
            json out = json::array();
            {
                py::gil_scoped_release release;
                for (const auto& r : run_experiment(config, offline_for(config))) out.push_back(to_json(r));
            }
            return out.dump();
        },
        py::arg("config_json"), "Adaptive ROM runs at every evaluation point and strategy; JSON records.");

    m.def(
        "bench",
        [](const std::string& text) {
            const auto config = parse_config(text);
            config.validate();
            json out;
            {
                py::gil_scoped_release release;
                out = to_json(bench_compare(config, offline_for(config)));
            }
            return out.dump();
        },
        py::arg("config_json"), "Full model vs strategies cost table as JSON.");
}
