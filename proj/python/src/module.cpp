#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "covlocc/scenarios.hpp"

namespace py = pybind11;
using namespace covlocc;

namespace {

Scenario tag(const std::string& s) { return parse_scenario(s); }

SdpOptions options(double gap, double floor, int max_iterations) {
  SdpOptions o;
  o.gap_tolerance = gap;
  o.barrier_floor = floor;
  o.max_iterations = max_iterations;
  return o;
}

py::dict point_dict(const PointResult& r) {
  py::dict d;
  d["fidelity"] = r.fidelity;
  d["status"] = std::string(to_string(r.solution.status));
  d["gap"] = r.solution.gap;
  d["iterations"] = r.solution.iterations;
  d["x"] = r.solution.x;
  d["choi"] = r.choi.matrix();
  return d;
}

ChoiMatrix choi(const Matrix& m) { return ChoiMatrix(m); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal covariant LOCC transformations between two-qubit pure states";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  m.def("scenarios", [] {
    std::vector<std::string> out;
    for (Scenario s : kAllScenarios) out.emplace_back(scenario_tag(s));
    return out;
  });

  m.def("labels", [](const std::string& s) {
    std::vector<std::string> out;
    for (const auto& t : build_ansatz(tag(s)).terms) out.push_back(t.label);
    return out;
  }, py::arg("scenario"));

  m.def("objective_vector", [](const std::string& s, double a, double c) { return objective_vector(tag(s), a, c); },
        py::arg("scenario"), py::arg("a"), py::arg("c"));

  m.def("solve_point",
        [](const std::string& s, double a, double c, bool ppt, double gap, double floor, int max_iterations) {
          PointResult r = [&] {
            py::gil_scoped_release release;
            return solve_point(tag(s), a, c, ppt, options(gap, floor, max_iterations));
          }();
          return point_dict(r);
        },
        py::arg("scenario"), py::arg("a"), py::arg("c"), py::arg("ppt") = true, py::arg("gap_tolerance") = 1e-7,
        py::arg("barrier_floor") = 1e-9, py::arg("max_iterations") = 500);

  m.def("analytic_fidelity", [](const std::string& s, double a, double c) { return analytic_fidelity(tag(s), a, c); },
        py::arg("scenario"), py::arg("a"), py::arg("c"));

  m.def("sweep_csv",
        [](const std::string& s, int grid, bool ppt, int jobs) {
          std::ostringstream os;
          {
            py::gil_scoped_release release;
            write_csv(os, grid_sweep(tag(s), grid, ppt, jobs));
          }
          return os.str();
        },
        py::arg("scenario"), py::arg("grid"), py::arg("ppt") = true, py::arg("jobs") = 0);

  m.def("export_json",
        [](const std::string& s, double a, double c, bool ppt, const std::string& id, const std::string& meta) {
          return export_problem_json(make_problem(build_ansatz(tag(s)), a, c, ppt), id, meta);
        },
        py::arg("scenario"), py::arg("a"), py::arg("c"), py::arg("ppt"), py::arg("id"), py::arg("meta") = "{}");

  m.def("published_kraus", [](const std::string& s, double d011) { return published_kraus(tag(s), d011); },
        py::arg("scenario"), py::arg("d011") = 0.25);
  m.def("d011_ppt_interval", [] {
    const auto iv = d011_ppt_interval();
    return iv ? py::make_tuple(iv->lower, iv->upper) : py::object(py::none());
  });

  m.def("choi_from_kraus", [](const KrausSet& k) { return choi_from_kraus(k).matrix(); }, py::arg("kraus"));
  m.def("kraus_from_choi", [](const Matrix& r) { return kraus_from_choi(choi(r)); }, py::arg("choi"));
  m.def("check_tp", [](const Matrix& r) { return check_tp(choi(r)); }, py::arg("choi"));
  m.def("check_cp", [](const Matrix& r) { return check_cp(choi(r)); }, py::arg("choi"));
  m.def("check_ppt", [](const Matrix& r) { return check_ppt(choi(r)); }, py::arg("choi"));
  m.def("channel_fidelity",
        [](const Matrix& r, double a, double c) { return channel_fidelity(choi(r), SchmidtState(a), SchmidtState(c)); },
        py::arg("choi"), py::arg("a"), py::arg("c"));
  m.def("covariance_residual",
        [](const Matrix& r, const std::string& s, int samples, std::uint64_t seed) {
          return verify_covariance(choi(r), tag(s), samples, seed).commutator_residual;
        },
        py::arg("choi"), py::arg("scenario"), py::arg("samples") = 20, py::arg("seed") = 1);
}
