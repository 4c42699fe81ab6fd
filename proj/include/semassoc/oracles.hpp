#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

#include "semassoc/problem.hpp"

namespace semassoc {

/// Caps for the brute-force engines.
struct EnumerationBudget {
  long max_assignments = 10'000'000;
  /// When set, true_marginals keeps only the T largest log-probability terms
  /// of each (measurement, target) cell numerator.
  std::optional<long> top_terms;
};

/// Thrown when an oracle refuses an input that exceeds its budget or
/// dimension cap; carries the count reached when the refusal triggered.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double count_estimate)
      : std::runtime_error(what), count_estimate(count_estimate) {}
  double count_estimate;
};

/// Counts assignments by depth-first search, aborting once the count would
/// exceed `cap`. Returns nullopt on abort.
std::optional<long> count_by_dfs(const AssignmentProblem& p, long cap);

/// Visits every assignment of p (pair map plus canonical log_prob) in
/// depth-first order. Throws BudgetExceeded if the count pre-check fails.
void enumerate_visit(const AssignmentProblem& p, const EnumerationBudget& b,
                     const std::function<void(const std::vector<int>&, double)>& visit);

/// Materialized enumeration; intended for small problems.
std::vector<Assignment> enumerate_all(const AssignmentProblem& p, const EnumerationBudget& b);

/// True marginals (uniform assignment prior) by full log-domain
/// marginalization over every assignment. gamma = 0.
MarginalTable true_marginals(const AssignmentProblem& p, const EnumerationBudget& b);

/// log permanent of a dense square matrix of non-negative reals, by Ryser's
/// inclusion-exclusion with Gray-code subset iteration, a single global
/// rescale, and long double compensated accumulation. Refuses dim > 30 or
/// non-square input.
double permanent_ryser_log(const std::vector<double>& m, int dim);

/// Exact marginals via permanent ratios on the square completion
/// (likelihood matrix plus all-ones dummy rows): w_kj = exp(l_kj +
/// log perm(minor_kj) - log perm(full)). Refuses square dimension > 30.
MarginalTable permanent_marginals(const AssignmentProblem& p);

/// Exact assignment count by dynamic programming over landmark subsets.
/// Refuses n_land > 20 or counts above 10^12.
uint64_t count_exact(const AssignmentProblem& p);

}  // namespace semassoc
