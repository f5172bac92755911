// Python bindings for the coordinate mechanics engine: model loading, the
// frame matrices of both formulations, dynamics fields, integration and the
// property-check suite.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "algmech/algebroid.hpp"
#include "algmech/dynamics.hpp"
#include "algmech/errors.hpp"
#include "algmech/prolongation.hpp"
#include "algmech/tulczyjew.hpp"
#include "algmech/verify.hpp"

namespace py = pybind11;
using namespace algmech;

namespace {

ScalarField field_for(const AlgebroidModel& M, const std::string& text,
                      Side side) {
  return ScalarField::parse(text, M.phase_vars(side));
}

ELRoute route_from(const std::string& name) {
  if (name == "phase") return ELRoute::Phase;
  if (name == "prolong") return ELRoute::Prolong;
  throw py::value_error("route must be 'phase' or 'prolong', got '" + name +
                        "'");
}

py::dict trajectory_dict(const Trajectory& traj) {
  const Eigen::Index rows = static_cast<Eigen::Index>(traj.times.size());
  Eigen::VectorXd t(rows);
  Eigen::MatrixXd states(rows, traj.states.empty() ? 0 : traj.states[0].size());
  Eigen::MatrixXd monitors(rows,
                           traj.monitors.empty() ? 0 : traj.monitors[0].size());
  for (Eigen::Index k = 0; k < rows; ++k) {
    t[k] = traj.times[static_cast<size_t>(k)];
    states.row(k) = traj.states[static_cast<size_t>(k)];
    monitors.row(k) = traj.monitors[static_cast<size_t>(k)];
  }
  py::dict d;
  d["t"] = t;
  d["states"] = states;
  d["state_names"] = traj.state_names;
  d["monitors"] = monitors;
  d["monitor_names"] = traj.monitor_names;
  return d;
}

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["check"] = r.check;
  d["model"] = r.model;
  d["samples"] = r.samples;
  d["max_residual"] = r.max_residual;
  d["tol"] = r.tol;
  d["passed"] = r.passed;
  d["expected_fail"] = r.expected_fail;
  d["seed"] = r.seed;
  d["ok"] = r.ok();
  return d;
}

py::list report_list(const std::vector<VerificationReport>& reports) {
  py::list out;
  for (const VerificationReport& r : reports) out.append(report_dict(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "coordinate engine for mechanics on anchored vector bundles";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<SingularError>(m, "SingularError",
                                        PyExc_ArithmeticError);

  py::class_<AlgebroidModel>(m, "Model")
      .def_static("builtin", &AlgebroidModel::builtin, py::arg("name"))
      .def_static("from_file", &AlgebroidModel::from_file, py::arg("path"))
      .def_static("from_json_text", &AlgebroidModel::from_json_text,
                  py::arg("text"))
      .def_static("builtin_names", &AlgebroidModel::builtin_names)
      .def_property_readonly("name", &AlgebroidModel::name)
      .def_property_readonly("n", &AlgebroidModel::n)
      .def_property_readonly("m", &AlgebroidModel::m)
      .def_property_readonly("almost_lie", &AlgebroidModel::almost_lie)
      .def("rho", &AlgebroidModel::rho, py::arg("x"),
           "anchor matrix values, n x m")
      .def("structure", &AlgebroidModel::structure, py::arg("x"),
           "per-output-index structure function matrices C^c_ab(x)")
      .def("__repr__", [](const AlgebroidModel& M) {
        std::ostringstream os;
        os << "Model(name='" << M.name() << "', n=" << M.n()
           << ", m=" << M.m() << ", almost_lie="
           << (M.almost_lie() ? "True" : "False") << ")";
        return os.str();
      });

  m.def(
      "jet_eval",
      [](const std::string& text, const std::vector<std::string>& vars,
         const Eigen::VectorXd& x) {
        const Jet2 j = ScalarField::parse(text, vars).jet(x);
        return py::make_tuple(j.value(), j.grad(), j.hess());
      },
      py::arg("text"), py::arg("vars"), py::arg("x"),
      "value, gradient and hessian of an expression at x");

  m.def(
      "almost_lie_residual",
      [](const AlgebroidModel& M, const Eigen::VectorXd& x) {
        return almost_lie_residual(M, x);
      },
      py::arg("model"), py::arg("x"));

  m.def(
      "lambda_matrix",
      [](const AlgebroidModel& M, const Eigen::VectorXd& x,
         const Eigen::VectorXd& xi) {
        return lambda_matrix(M, M.point(Side::Dual, x, xi));
      },
      py::arg("model"), py::arg("x"), py::arg("xi"),
      "bi-vector matrix on the dual in coordinates (x, xi)");

  m.def(
      "omega_matrix",
      [](const AlgebroidModel& M, const Eigen::VectorXd& x,
         const Eigen::VectorXd& xi) {
        return omega_matrix(M, M.point(Side::Dual, x, xi));
      },
      py::arg("model"), py::arg("x"), py::arg("xi"),
      "canonical two-form matrix in the standard prolongation frame");

  m.def(
      "hamiltonian_field",
      [](const AlgebroidModel& M, const std::string& h,
         const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
        const TangentVec X = hamiltonian_field(
            M, field_for(M, h, Side::Dual), M.point(Side::Dual, x, xi));
        return py::make_tuple(X.dx, X.dfiber);
      },
      py::arg("model"), py::arg("h"), py::arg("x"), py::arg("xi"),
      "(dx, dxi) of the Hamiltonian field at (x, xi)");

  m.def(
      "hamiltonian_section",
      [](const AlgebroidModel& M, const std::string& h,
         const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
        const ProlongVector v = hamiltonian_section(
            M, field_for(M, h, Side::Dual), M.point(Side::Dual, x, xi));
        return py::make_tuple(v.e, v.w);
      },
      py::arg("model"), py::arg("h"), py::arg("x"), py::arg("xi"),
      "(e, w) frame coefficients of the Hamiltonian section");

  m.def(
      "el_field",
      [](const AlgebroidModel& M, const std::string& l,
         const Eigen::VectorXd& x, const Eigen::VectorXd& y,
         const std::string& route) {
        const TangentVec X =
            el_field(M, field_for(M, l, Side::E), M.point(Side::E, x, y),
                     route_from(route));
        return py::make_tuple(X.dx, X.dfiber);
      },
      py::arg("model"), py::arg("l"), py::arg("x"), py::arg("y"),
      py::arg("route") = "phase",
      "(dx, dy) of the Euler-Lagrange field via the chosen route");

  m.def(
      "el_residuals",
      [](const AlgebroidModel& M, const std::string& l,
         const Eigen::VectorXd& x, const Eigen::VectorXd& y,
         const Eigen::VectorXd& dx, const Eigen::VectorXd& dy) {
        const ScalarField L = field_for(M, l, Side::E);
        const PhasePoint a = M.point(Side::E, x, y);
        const TangentVec X{a, dx, dy};
        py::dict d;
        d["phase"] = el_residual_tt(M, L, a, X);
        d["prolong"] = el_residual_prolong(M, L, a, X);
        d["admissibility"] = admissibility_residual(M, a, X);
        return d;
      },
      py::arg("model"), py::arg("l"), py::arg("x"), py::arg("y"),
      py::arg("dx"), py::arg("dy"),
      "evolution-law residuals of the jet ((x, y), (dx, dy))");

  m.def(
      "energy",
      [](const AlgebroidModel& M, const std::string& l,
         const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return energy(M, field_for(M, l, Side::E), M.point(Side::E, x, y));
      },
      py::arg("model"), py::arg("l"), py::arg("x"), py::arg("y"));

  m.def(
      "legendre",
      [](const AlgebroidModel& M, const std::string& l,
         const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        const PhasePoint p =
            legendre(M, field_for(M, l, Side::E), M.point(Side::E, x, y));
        return py::make_tuple(p.x, p.fiber);
      },
      py::arg("model"), py::arg("l"), py::arg("x"), py::arg("y"),
      "(x, xi) image of the fiber derivative");

  m.def(
      "integrate_hamiltonian",
      [](const AlgebroidModel& M, const std::string& h,
         const Eigen::VectorXd& x0, const Eigen::VectorXd& xi0, double dt,
         double t_end) {
        return trajectory_dict(
            integrate_hamiltonian(M, field_for(M, h, Side::Dual),
                                  M.point(Side::Dual, x0, xi0), dt, t_end));
      },
      py::arg("model"), py::arg("h"), py::arg("x0"), py::arg("xi0"),
      py::arg("dt"), py::arg("t_end"));

  m.def(
      "integrate_el",
      [](const AlgebroidModel& M, const std::string& l,
         const Eigen::VectorXd& x0, const Eigen::VectorXd& y0, double dt,
         double t_end, const std::string& route) {
        return trajectory_dict(integrate_el(M, field_for(M, l, Side::E),
                                            M.point(Side::E, x0, y0), dt,
                                            t_end, route_from(route)));
      },
      py::arg("model"), py::arg("l"), py::arg("x0"), py::arg("y0"),
      py::arg("dt"), py::arg("t_end"), py::arg("route") = "phase");

  m.def(
      "verify_model",
      [](const AlgebroidModel& M, int samples, std::uint64_t seed,
         double tol_override) {
        return report_list(verify_model(M, samples, seed, tol_override));
      },
      py::arg("model"), py::arg("samples") = 40, py::arg("seed") = 12345,
      py::arg("tol_override") = 0.0,
      "property-check reports for one model as dicts");

  m.def(
      "verify_all",
      [](int samples, std::uint64_t seed, double tol_override) {
        return report_list(verify_all(samples, seed, tol_override));
      },
      py::arg("samples") = 40, py::arg("seed") = 12345,
      py::arg("tol_override") = 0.0,
      "property-check reports for every builtin model");
}
