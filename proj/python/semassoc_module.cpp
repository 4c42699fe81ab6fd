#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semassoc/bench.hpp"
#include "semassoc/logsumexp.hpp"
#include "semassoc/marginals.hpp"
#include "semassoc/murty.hpp"
#include "semassoc/oracles.hpp"
#include "semassoc/problem_io.hpp"
#include "semassoc/quadric.hpp"
#include "semassoc/scenario.hpp"

namespace py = pybind11;
using namespace semassoc;

namespace {

std::vector<std::vector<double>> table_rows(const MarginalTable& t) {
  std::vector<std::vector<double>> rows(t.n_meas);
  for (int k = 0; k < t.n_meas; ++k) {
    rows[k].resize(t.n_land + 1);
    for (int j = 0; j <= t.n_land; ++j) rows[k][j] = t.w(k, j);
  }
  return rows;
}

AssignmentProblem problem_from_rows(const std::vector<std::vector<double>>& log_lik,
                                    const std::vector<double>& null_log_lik) {
  AssignmentProblem p;
  p.n_meas = static_cast<int>(log_lik.size());
  p.n_land = p.n_meas > 0 ? static_cast<int>(log_lik[0].size()) : 0;
  for (const auto& row : log_lik) {
    if (static_cast<int>(row.size()) != p.n_land) {
      throw std::invalid_argument("log_lik rows must have equal length");
    }
    p.log_lik.insert(p.log_lik.end(), row.begin(), row.end());
  }
  p.null_log_lik = null_log_lik;
  p.validate();
  return p;
}

Eigen::Vector3d to_vec3(const std::vector<double>& v, const char* name) {
  if (v.size() != 3) throw std::invalid_argument(std::string(name) + " must have 3 entries");
  return {v[0], v[1], v[2]};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Marginal measurement-to-landmark association probabilities via k-best "
            "assignment enumeration, with exact oracles and a certified error bound.";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded");
  py::register_exception<DegenerateQuadric>(m, "DegenerateQuadric");

  py::class_<AssignmentProblem>(m, "AssignmentProblem")
      .def(py::init(&problem_from_rows), py::arg("log_lik"), py::arg("null_log_lik"))
      .def_readonly("n_meas", &AssignmentProblem::n_meas)
      .def_readonly("n_land", &AssignmentProblem::n_land)
      .def_readonly("null_log_lik", &AssignmentProblem::null_log_lik)
      .def_readonly("truth", &AssignmentProblem::truth)
      .def_readonly("meta", &AssignmentProblem::meta)
      .def_property_readonly("log_lik",
                             [](const AssignmentProblem& p) {
                               std::vector<std::vector<double>> rows(p.n_meas);
                               for (int k = 0; k < p.n_meas; ++k) {
                                 rows[k].assign(p.log_lik.begin() + (size_t)k * p.n_land,
                                                p.log_lik.begin() + (size_t)(k + 1) * p.n_land);
                               }
                               return rows;
                             })
      .def("max_dim", &AssignmentProblem::max_dim)
      .def("validate", &AssignmentProblem::validate)
      .def("to_json", &problem_write)
      .def_static("from_json", &problem_read)
      .def("__repr__", [](const AssignmentProblem& p) {
        return "<AssignmentProblem " + std::to_string(p.n_meas) + "x" +
               std::to_string(p.n_land) + ">";
      });

  py::class_<Assignment>(m, "Assignment")
      .def_readonly("target", &Assignment::target)
      .def_readonly("log_prob", &Assignment::log_prob)
      .def("__repr__", [](const Assignment& a) {
        std::string s = "<Assignment [";
        for (size_t i = 0; i < a.target.size(); ++i) {
          if (i) s += ", ";
          s += std::to_string(a.target[i]);
        }
        return s + "] log_prob=" + format_double(a.log_prob) + ">";
      });

  py::class_<RankedAssignmentSet>(m, "RankedAssignmentSet")
      .def_readonly("entries", &RankedAssignmentSet::entries)
      .def_readonly("exhausted", &RankedAssignmentSet::exhausted)
      .def("total_log_mass", &RankedAssignmentSet::total_log_mass)
      .def("__len__", [](const RankedAssignmentSet& r) { return r.entries.size(); });

  py::class_<MarginalTable>(m, "MarginalTable")
      .def_readonly("n_meas", &MarginalTable::n_meas)
      .def_readonly("n_land", &MarginalTable::n_land)
      .def_readonly("gamma", &MarginalTable::gamma)
      .def_readonly("k_used", &MarginalTable::k_used)
      .def_readonly("total_log_mass", &MarginalTable::total_log_mass)
      .def_property_readonly("w_bar", &table_rows)
      .def(
          "w", [](const MarginalTable& t, int k, int j) { return t.w(k, j); }, py::arg("k"),
          py::arg("j"))
      .def("w_null", &MarginalTable::w_null, py::arg("k"))
      .def("max_abs_diff", &MarginalTable::max_abs_diff)
      .def("validate", &MarginalTable::validate);

  m.def("log_sum_exp",
        [](const std::vector<double>& values) { return log_sum_exp(values); },
        py::arg("values"), "log(sum(exp(values))) by max-shifting; empty input raises");

  m.def("kbest", &kbest, py::arg("problem"), py::arg("k"),
        "The K likeliest assignments in non-increasing log_prob order");

  m.def(
      "marginals",
      [](const AssignmentProblem& p, const RankedAssignmentSet& ranked) {
        return marginals(p, ranked);
      },
      py::arg("problem"), py::arg("ranked"),
      "Approximate marginals over a ranked set, with the certified gamma bound");

  m.def(
      "solve",
      [](const AssignmentProblem& p, long k) { return marginals(p, kbest(p, k)); },
      py::arg("problem"), py::arg("k") = 200,
      "kbest + marginals in one call");

  m.def(
      "true_marginals",
      [](const AssignmentProblem& p, long budget, std::optional<long> top_terms) {
        EnumerationBudget b;
        b.max_assignments = budget;
        b.top_terms = top_terms;
        return true_marginals(p, b);
      },
      py::arg("problem"), py::arg("budget") = 10'000'000,
      py::arg("top_terms") = std::nullopt,
      "Exact marginals by brute-force enumeration");

  m.def("permanent_marginals", &permanent_marginals, py::arg("problem"),
        "Exact marginals via Ryser permanent ratios (square completion <= 30)");

  m.def(
      "enumerate_all",
      [](const AssignmentProblem& p, long budget) {
        EnumerationBudget b;
        b.max_assignments = budget;
        return enumerate_all(p, b);
      },
      py::arg("problem"), py::arg("budget") = 10'000'000);

  m.def("count_exact", &count_exact, py::arg("problem"));
  m.def(
      "count_bound_log",
      [](const AssignmentProblem& p) { return count_bound_log(feasibility(p)); },
      py::arg("problem"),
      "log of the assignment-count upper bound used by the error bound");

  m.def(
      "error_bound",
      [](const AssignmentProblem& p, const RankedAssignmentSet& ranked) {
        return error_bound(ranked, feasibility(p));
      },
      py::arg("problem"), py::arg("ranked"));

  m.def(
      "permanent_ryser_log",
      [](const std::vector<std::vector<double>>& rows) {
        int d = static_cast<int>(rows.size());
        std::vector<double> flat;
        flat.reserve(static_cast<size_t>(d) * d);
        for (const auto& r : rows) {
          if (static_cast<int>(r.size()) != d) {
            throw std::invalid_argument("matrix must be square");
          }
          flat.insert(flat.end(), r.begin(), r.end());
        }
        return permanent_ryser_log(flat, d);
      },
      py::arg("matrix"), "log permanent of a square non-negative matrix (dim <= 30)");

  py::class_<Ellipsoid>(m, "Ellipsoid")
      .def_static(
          "from_center_radii",
          [](const std::vector<double>& center, const std::vector<double>& radii) {
            return Ellipsoid::from_center_radii(to_vec3(center, "center"),
                                                to_vec3(radii, "radii"));
          },
          py::arg("center"), py::arg("radii"))
      .def_property_readonly("mu",
                             [](const Ellipsoid& e) {
                               return std::vector<double>{e.mu.x(), e.mu.y(), e.mu.z()};
                             })
      .def_property_readonly("P", [](const Ellipsoid& e) {
        std::vector<std::vector<double>> rows(3, std::vector<double>(3));
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) rows[r][c] = e.P(r, c);
        }
        return rows;
      });

  m.def("ellipsoid_distance", &ellipsoid_distance, py::arg("a"), py::arg("b"));

  m.def(
      "generate_corpus",
      [](const std::string& config_json, double null_cost, double gate) {
        return generate_corpus(scenario_from_json(config_json), null_cost, gate);
      },
      py::arg("config_json"), py::arg("null_cost") = -8.0, py::arg("gate") = 50.0,
      "Synthetic problem corpus from a scenario config JSON string");

  m.def("default_demo_config", &default_demo_config);
  m.def("problem_read", &problem_read, py::arg("bytes"));
  m.def("problem_write", &problem_write, py::arg("problem"));

#ifdef SEMASSOC_VERSION
  m.attr("__version__") = SEMASSOC_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
