#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sorlayout/benchmark.hpp"
#include "sorlayout/error.hpp"
#include "sorlayout/insertion.hpp"
#include "sorlayout/json_io.hpp"
#include "sorlayout/layout.hpp"
#include "sorlayout/regression.hpp"
#include "sorlayout/service.hpp"

namespace py = pybind11;
using namespace sorlayout;

namespace {

SolverConfig make_config(double omega, double tolerance, int max_iterations, std::uint64_t seed) {
  SolverConfig c;
  c.omega = omega;
  c.tolerance = tolerance;
  c.max_iterations = max_iterations;
  c.seed = seed;
  return c;
}

Solution start_or_zeros(const ConstraintSystem& system, const std::optional<std::vector<double>>& start) {
  return start ? Solution(*start) : Solution::zeros(system);
}

std::vector<std::size_t> ids(const std::vector<ConstraintId>& in) {
  std::vector<std::size_t> out;
  out.reserve(in.size());
  for (ConstraintId id : in) out.push_back(id.value);
  return out;
}

std::vector<double> values(const Solution& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

PYBIND11_MODULE(_sorlayout, m) {
  m.doc() = "SOR-based GUI layout constraint solver";

  py::register_exception<Error>(m, "SolverError", PyExc_ValueError);

  py::class_<ConstraintSystem>(m, "ConstraintSystem")
      .def(py::init<std::size_t>(), py::arg("variable_count") = 0)
      .def("add_variable", [](ConstraintSystem& s) { return s.add_variable().index; })
      .def(
          "add_constraint",
          [](ConstraintSystem& s, const std::vector<std::pair<std::size_t, double>>& terms,
             const std::string& relation, double rhs, int priority) {
            std::vector<Term> t;
            for (const auto& [var, coeff] : terms) t.push_back(Term{VariableId{var}, coeff});
            return s.add_constraint(std::move(t), relation_from_string(relation), rhs, priority)
                .value;
          },
          py::arg("terms"), py::arg("relation"), py::arg("rhs"), py::arg("priority"))
      .def("update_rhs",
           [](ConstraintSystem& s, std::size_t id, double rhs) {
             return s.update_rhs(ConstraintId{id}, rhs);
           })
      .def_property_readonly("variable_count", &ConstraintSystem::variable_count)
      .def("__len__", &ConstraintSystem::size)
      .def("to_json", [](const ConstraintSystem& s) { return system_to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return system_from_json(nlohmann::json::parse(text));
      });

  m.def(
      "solve",
      [](const ConstraintSystem& system, std::optional<std::vector<double>> start,
         std::optional<std::vector<std::size_t>> enabled, double omega, double tolerance,
         int max_iterations, std::uint64_t seed) {
        std::vector<ConstraintId> on;
        if (enabled) {
          for (std::size_t id : *enabled) on.push_back(ConstraintId{id});
        } else {
          on = system.priority_order();
        }
        const Solution x0 = start_or_zeros(system, start);
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(system, on, x0, make_config(omega, tolerance, max_iterations, seed));
        }
        py::dict out;
        out["values"] = values(r.solution);
        out["converged"] = r.converged;
        out["reached_stability"] = r.reached_stability;
        out["iterations"] = r.iterations;
        out["final_error"] = r.final_error;
        return out;
      },
      py::arg("system"), py::arg("start") = py::none(), py::arg("enabled") = py::none(),
      py::arg("omega") = 0.7, py::arg("tolerance") = 0.01, py::arg("max_iterations") = 1000,
      py::arg("seed") = 0);

  m.def(
      "solve_with_insertion",
      [](const ConstraintSystem& system, std::optional<std::vector<double>> start, double omega,
         double tolerance, int max_iterations, std::uint64_t seed) {
        const Solution x0 = start_or_zeros(system, start);
        ResolvedSolve r;
        {
          py::gil_scoped_release release;
          r = solve_with_insertion(system, x0, make_config(omega, tolerance, max_iterations, seed));
        }
        py::dict out;
        out["values"] = values(r.solution);
        out["enabled"] = ids(r.enabled);
        out["disabled"] = ids(r.disabled);
        out["total_sweeps"] = r.total_sweeps;
        out["attempts"] = r.attempts;
        out["converged_attempts"] = r.converged_attempts;
        return out;
      },
      py::arg("system"), py::arg("start") = py::none(), py::arg("omega") = 0.7,
      py::arg("tolerance") = 0.01, py::arg("max_iterations") = 1000, py::arg("seed") = 0);

  py::class_<LayoutSpec>(m, "Layout")
      .def_property_readonly("system", [](const LayoutSpec& l) { return l.system; })
      .def_property_readonly("width", [](const LayoutSpec& l) { return l.width; })
      .def_property_readonly("height", [](const LayoutSpec& l) { return l.height; })
      .def_property_readonly("n_areas", [](const LayoutSpec& l) { return l.areas.size(); })
      .def("resize", [](LayoutSpec& l, double w, double h) { resize(l, w, h); })
      .def(
          "perturb",
          [](LayoutSpec& l, double fraction, std::uint64_t seed) {
            Rng rng(seed);
            return ids(perturb_constraints(l, fraction, rng));
          },
          py::arg("fraction") = 0.1, py::arg("seed") = 0)
      .def("area_rects",
           [](const LayoutSpec& l, const std::vector<double>& x) {
             std::vector<std::tuple<double, double, double, double>> out;
             for (const Rect& r : area_rects(l, Solution(x))) {
               out.emplace_back(r.left, r.top, r.right, r.bottom);
             }
             return out;
           })
      .def("to_json", [](const LayoutSpec& l) { return layout_to_json(l).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return layout_from_json(nlohmann::json::parse(text));
      });

  m.def("generate_layout", &generate_layout, py::arg("n_areas"), py::arg("width") = 800.0,
        py::arg("height") = 600.0, py::arg("seed") = 0);

  m.def(
      "fit_cubic",
      [](const std::vector<double>& c, const std::vector<double>& t) {
        if (c.size() != t.size()) throw Error(ErrorCode::kLengthMismatch, "c and t differ in length");
        std::vector<SamplePoint> points;
        for (std::size_t i = 0; i < c.size(); ++i) points.push_back(SamplePoint{c[i], t[i]});
        RegressionFit fit = fit_cubic(points);
        return py::make_tuple(
            py::make_tuple(fit.beta[0], fit.beta[1], fit.beta[2], fit.beta[3]), fit.r_squared);
      },
      py::arg("c"), py::arg("t"));

  m.def(
      "bench_main",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = bench_cli_main(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  py::class_<SolverService>(m, "_Service")
      .def(py::init([](std::size_t max_sessions, double omega, double tolerance,
                       std::uint64_t token_seed) {
             ServiceConfig c;
             c.max_sessions = max_sessions;
             c.default_omega = omega;
             c.default_tolerance = tolerance;
             c.token_seed = token_seed;
             return std::make_unique<SolverService>(c);
           }),
           py::arg("max_sessions") = 64, py::arg("omega") = 0.7, py::arg("tolerance") = 0.01,
           py::arg("token_seed") = 0)
      .def("handle",
           [](SolverService& s, const std::string& request) {
             nlohmann::json parsed = nlohmann::json::parse(request, nullptr, false);
             py::gil_scoped_release release;
             return s.handle(parsed).dump();
           })
      .def_property_readonly("session_count", &SolverService::session_count);
}
