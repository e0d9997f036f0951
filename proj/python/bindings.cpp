#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bekk/drift.hpp"
#include "bekk/errors.hpp"
#include "bekk/examples.hpp"
#include "bekk/json_io.hpp"
#include "bekk/simulate.hpp"
#include "bekk/stationarity.hpp"
#include "bekk/version.hpp"

namespace py = pybind11;
using namespace bekk;

namespace {

// Models and reports cross the boundary as JSON text; the Python layer turns
// them into dicts.
BekkModel model_from(const std::string& text) {
  return BekkModel::validate(parameters_from_json(parse_json_text(text, "<model>")));
}

std::optional<ChainState> state_from(const BekkModel& m, const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  return state_from_json(m, parse_json_text(*text, "<state>"));
}

py::array_t<double> rows(const std::vector<double>& data, long n, long width) {
  py::array_t<double> out({n, width});
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stationarity checks, drift certificates and simulation for BEKK GARCH models.";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("example_names", &example_names);
  m.def("example", [](const std::string& name) {
    return parameters_to_json(builtin_example(name).params).dump();
  });
  m.def("example_off_start", [](const std::string& name) -> std::optional<std::string> {
    const auto ex = builtin_example(name);
    if (!ex.off_start) return std::nullopt;
    return state_to_json(*ex.off_start).dump();
  });
  m.def("model_hash", [](const std::string& model) { return model_from(model).hash(); });

  m.def(
      "check",
      [](const std::string& model, double margin) {
        StationarityOptions o;
        o.margin = margin;
        return to_json(check_h3(model_from(model), o)).dump();
      },
      py::arg("model"), py::arg("margin") = 0.0);

  m.def("certificate", [](const std::string& model) {
    const BekkModel bm = model_from(model);
    const DriftCertificate c = build_certificate(bm);
    Json j = to_json(c);
    j["telescoping_residuals"] = to_json(telescoping_residuals(bm, c));
    return j.dump();
  });

  m.def(
      "conditional_drift",
      [](const std::string& model, const std::string& state) {
        const BekkModel bm = model_from(model);
        const DriftCertificate c = build_certificate(bm);
        const ChainState y = *state_from(bm, state);
        return py::make_tuple(evaluate_V(c, y), conditional_drift(bm, c, y));
      },
      py::arg("model"), py::arg("state"));

  m.def(
      "simulate",
      [](const std::string& model, long n, long burn_in, std::uint64_t seed, std::uint64_t stream,
         const std::string& innovation, const std::string& sqrt_mode,
         const std::optional<std::string>& start) {
        const BekkModel bm = model_from(model);
        RunOptions o;
        o.n = n;
        o.burn_in = burn_in;
        o.seed = seed;
        o.stream = stream;
        o.innovation = InnovationSpec::parse(innovation);
        if (sqrt_mode == "cholesky") {
          o.sqrt_mode = SqrtMode::Cholesky;
        } else if (sqrt_mode != "symmetric") {
          throw DomainError("sqrt_mode must be 'symmetric' or 'cholesky'");
        }
        const std::optional<ChainState> y0 = state_from(bm, start);
        Trajectory t;
        {
          py::gil_scoped_release release;
          t = run(bm, y0, o);
        }
        return py::make_tuple(rows(t.x_data, t.size(), t.d),
                              rows(t.sigma_data, t.size(), half_dim(t.d)),
                              trajectory_sidecar(t).dump());
      },
      py::arg("model"), py::arg("n") = 1000, py::arg("burn_in") = 0, py::arg("seed") = 0,
      py::arg("stream") = 0, py::arg("innovation") = "gaussian",
      py::arg("sqrt_mode") = "symmetric", py::arg("start") = py::none());

  m.def(
      "offstate_probe",
      [](const std::string& model, const std::string& state, long horizon, std::uint64_t seed) {
        const BekkModel bm = model_from(model);
        return to_json(offstate_probe(bm, *state_from(bm, state), horizon, seed)).dump();
      },
      py::arg("model"), py::arg("state"), py::arg("horizon") = 0, py::arg("seed") = 0);

  m.def("vech", [](const Eigen::MatrixXd& s) { return vech(SymMatrix::from_dense(s)); });
  m.def("unvech", [](const Eigen::VectorXd& v) { return unvech(v).matrix(); });
  m.def("elimination_duplication", [](int d) {
    const auto ops = elimination_duplication(d);
    return py::make_tuple(ops.H, ops.K);
  });
}
