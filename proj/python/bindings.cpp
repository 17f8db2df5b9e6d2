#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopfkit/dispersion.hpp"
#include "hopfkit/hopf_multiple.hpp"
#include "hopfkit/hopf_single.hpp"
#include "hopfkit/pde_sim.hpp"
#include "hopfkit/reproduce.hpp"
#include "hopfkit/spectral.hpp"
#include "json_out.hpp"

namespace py = pybind11;
using namespace hopfkit;

namespace {

// Result structs cross the boundary as plain dicts, same layout as the CLI JSON.
py::object to_py(const cli::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Model make(const std::string& kind, std::optional<double> delta, std::optional<double> epsilon0,
           std::optional<Vec4> c) {
  const ModelKind k = parse_model_kind(kind);
  const Model d = default_model(k);
  return build_model(k, delta.value_or(d.delta), epsilon0.value_or(d.epsilon0), c.value_or(d.c));
}

std::pair<Model, CrossingResult> critical(const Model& m0) {
  const CrossingResult c = find_crossing(m0);
  Model m = m0;
  if (m.kind == ModelKind::symmetric && !m.lambda_ref) m = with_lambda_ref(m, c.lambda0);
  return {m, c};
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Hopf bifurcation toolkit for four-species transport-reaction models";

  auto base = py::register_exception<Error>(mod, "HopfkitError", PyExc_RuntimeError);
  py::register_exception<DomainError>(mod, "DomainError", base);
  py::register_exception<NoCrossing>(mod, "NoCrossing", base);
  py::register_exception<SimplicityViolation>(mod, "SimplicityViolation", base);
  py::register_exception<ResonanceDetected>(mod, "ResonanceDetected", base);
  py::register_exception<SymmetryViolation>(mod, "SymmetryViolation", base);
  py::register_exception<BlowupDetected>(mod, "BlowupDetected", base);

  py::class_<Model>(mod, "Model")
      .def_property_readonly("kind", [](const Model& m) { return to_string(m.kind); })
      .def_readonly("delta", &Model::delta)
      .def_readonly("epsilon0", &Model::epsilon0)
      .def_readonly("c", &Model::c)
      .def_readonly("D", &Model::D)
      .def_readonly("U", &Model::U)
      .def_readonly("A", &Model::A)
      .def_readonly("DA", &Model::DA)
      .def_readonly("lambda_ref", &Model::lambda_ref)
      .def("to_dict", [](const Model& m) { return to_py(cli::to_json(m)); })
      .def("__repr__", [](const Model& m) {
        return "<Model " + to_string(m.kind) + " delta=" + fmt9(m.delta) + " epsilon0=" + fmt9(m.epsilon0) + ">";
      });

  mod.def("default_model", [](const std::string& kind) { return default_model(parse_model_kind(kind)); },
          py::arg("kind") = "nonsymmetric");
  mod.def("build_model", &make, py::arg("kind") = "nonsymmetric", py::arg("delta") = py::none(),
          py::arg("epsilon0") = py::none(), py::arg("c") = py::none());
  mod.def("with_A", &with_A, py::arg("model"), py::arg("A"));
  mod.def("with_lambda_ref", &with_lambda_ref, py::arg("model"), py::arg("lambda_ref"));

  mod.def("symbol_matrix", &symbol_matrix, py::arg("model"), py::arg("k"));
  mod.def("symbol_matrix_mode", &symbol_matrix_mode, py::arg("model"), py::arg("n"), py::arg("lam"));
  mod.def("eigenvalues", [](const CMat4& a) {
    const auto z = eigenvalues(a);
    return std::vector<cplx>(z.begin(), z.end());
  });
  mod.def("check_reflection", [](const Model& m) { return to_py(cli::to_json(check_reflection(m))); });
  mod.def("check_mass_structure", [](const Model& m) { return to_py(cli::to_json(check_mass_structure(m))); });

  mod.def(
      "dispersion",
      [](const Model& m, double k_min, double k_max, double k_step) {
        const auto scan = eigen_branches(m, uniform_grid(k_min, k_max, k_step));
        const auto g = growth_rate_and_classify(scan);
        Eigen::MatrixXcd z(scan.k.size(), 4);
        for (std::size_t i = 0; i < scan.k.size(); ++i)
          for (int q = 0; q < 4; ++q) z(i, q) = scan.z[i][q];
        py::dict out;
        out["k"] = Eigen::VectorXd::Map(scan.k.data(), scan.k.size()).eval();
        out["z"] = z;
        out["omega"] = Eigen::VectorXd::Map(g.omega.data(), g.omega.size()).eval();
        out["classification"] = to_string(g.classification);
        out["k_max"] = g.k_max;
        out["omega_max"] = g.omega_max;
        return out;
      },
      py::arg("model"), py::arg("k_min") = -12.0, py::arg("k_max") = 12.0, py::arg("k_step") = 0.01);

  mod.def("find_crossing", [](const Model& m) { return to_py(cli::to_json(find_crossing(m))); }, py::arg("model"));

  mod.def(
      "hopf_single",
      [](const Model& m0) {
        const auto [m, c] = critical(m0);
        return to_py(cli::to_json(analyze_single(m, c.lambda0, c.kappa0)));
      },
      py::arg("model"));

  mod.def(
      "hopf_multiple",
      [](const Model& m0, const std::string& shift, const std::string& form) {
        if (shift != "plus" && shift != "minus") throw DomainError("shift must be plus or minus");
        if (form != "reference" && form != "literal") throw DomainError("form must be reference or literal");
        const auto [m, c] = critical(m0);
        return to_py(cli::to_json(analyze_multiple(m, c.lambda0, c.kappa0,
                                                   shift == "plus" ? HarmonicShift::plus : HarmonicShift::minus,
                                                   form == "reference" ? RealForm::reference : RealForm::literal)));
      },
      py::arg("model"), py::arg("shift") = "plus", py::arg("form") = "reference");

  mod.def(
      "simulate",
      [](const Model& m0, std::optional<double> lam, double lambda_factor, double T, double dt, int N,
         double sample_dt, double amp) {
        const auto [m, c] = critical(m0);
        const double lambda = lam.value_or(lambda_factor * c.lambda0);
        SimParams p;
        p.T = T;
        p.dt = dt;
        p.N = N;
        p.sample_dt = sample_dt;
        SimDiagnostics d;
        {
          py::gil_scoped_release release;
          d = run_diagnostics(m, lambda, p, default_perturbation(m, lambda, amp), true);
        }
        auto out = to_py(cli::to_json(d));
        out["lambda"] = lambda;
        return out;
      },
      py::arg("model"), py::arg("lam") = py::none(), py::arg("lambda_factor") = 1.02, py::arg("T") = 200.0,
      py::arg("dt") = 1e-3, py::arg("N") = 64, py::arg("sample_dt") = 0.01, py::arg("amp") = 1e-4);

  mod.def("criterion_count", &criterion_count);
  mod.def(
      "run_criterion",
      [](int id) {
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id);
        }
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["name"] = row.name;
          d["expected"] = row.expected;
          d["computed"] = row.computed;
          d["tolerance"] = row.tolerance;
          d["pass"] = row.pass;
          d["informational"] = row.informational;
          rows.append(d);
        }
        py::dict out;
        out["id"] = r.id;
        out["title"] = r.title;
        out["rows"] = rows;
        out["seconds"] = r.seconds;
        out["error"] = r.error;
        out["pass"] = r.pass();
        return out;
      },
      py::arg("id"));
}
