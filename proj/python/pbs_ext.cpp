#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pbs/beam.hpp"
#include "pbs/cli.hpp"
#include "pbs/detections.hpp"
#include "pbs/diagrams.hpp"
#include "pbs/error.hpp"
#include "pbs/geometry.hpp"
#include "pbs/service.hpp"
#include "pbs/solver.hpp"

namespace py = pybind11;

namespace {

pbs::DiagramKind kind_of(const std::string& name) {
    if (name == "shear") return pbs::DiagramKind::Shear;
    if (name == "moment") return pbs::DiagramKind::Moment;
    if (name == "deflection") return pbs::DiagramKind::Deflection;
    throw pbs::Error(pbs::ErrorCode::InvalidValue, "unknown diagram kind '" + name + "'", "kind");
}

pbs::BeamSolution solve_text(const std::string& spec, std::optional<double> ei) {
    return pbs::solve_beam(pbs::require_valid(pbs::deserialize_beam(spec)), ei);
}

}  // namespace

PYBIND11_MODULE(_pbs, m) {
    m.doc() = "Beam interpretation and solver core";
    m.attr("__version__") = std::string(pbs::kVersion);

    static py::exception<pbs::Error> error(m, "PbsError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const pbs::Error& e) {
            py::object instance = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            instance.attr("code") = std::string(pbs::code_name(e.code()));
            instance.attr("path") = e.path();
            PyErr_SetObject(error.ptr(), instance.ptr());
        }
    });

    m.def("schema", [] { return pbs::beam_schema(); }, "BeamSpec JSON schema");

    m.def(
        "validate",
        [](const std::string& spec) {
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            for (const auto& issue : pbs::validate_beam(pbs::deserialize_beam(spec)).errors) {
                out.emplace_back(std::string(pbs::code_name(issue.code)), issue.path, issue.message);
            }
            return out;
        },
        py::arg("spec"), "List of (code, path, message) for a BeamSpec document; empty when valid");

    m.def(
        "solve", [](const std::string& spec, std::optional<double> ei) { return pbs::serialize_solution(solve_text(spec, ei)); },
        py::arg("spec"), py::arg("ei") = py::none(), "Solve a BeamSpec document; returns the solution document");

    m.def(
        "diagram",
        [](const std::string& spec, const std::string& kind, int samples, std::optional<double> ei) {
            return pbs::serialize_series(pbs::sample_series(solve_text(spec, ei), kind_of(kind), samples));
        },
        py::arg("spec"), py::arg("kind"), py::arg("samples") = pbs::kDefaultSamples, py::arg("ei") = py::none(),
        "Sampled shear, moment or deflection series");

    m.def(
        "summary", [](const std::string& spec, std::optional<double> ei) { return pbs::summary_text(solve_text(spec, ei)); },
        py::arg("spec"), py::arg("ei") = py::none());

    m.def(
        "infer",
        [](const std::string& detections, double confidence, double iou) {
            pbs::InferenceOptions opts;
            opts.confidence_threshold = confidence;
            opts.iou_threshold = iou;
            return pbs::serialize_report(pbs::build_beam_spec(pbs::parse_detections(detections), opts));
        },
        py::arg("detections"), py::arg("confidence") = pbs::InferenceOptions{}.confidence_threshold,
        py::arg("iou") = pbs::InferenceOptions{}.iou_threshold, "Infer a BeamSpec from a detections document");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = pbs::run_cli(args, out, err);
            }
            return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the pbs command; returns (exit code, stdout, stderr)");
}
