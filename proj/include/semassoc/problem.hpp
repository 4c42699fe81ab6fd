#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semassoc/logsumexp.hpp"

namespace semassoc {

/// Target index of the null (non-)association in Assignment::target and in
/// the `truth` vector of problem files.
inline constexpr int kNullTarget = -1;

/// One data-association problem: a dense matrix of measurement-landmark
/// log-likelihoods plus a per-measurement null log-likelihood. Entries are
/// finite or -inf (gated pair); the null entry is always finite, so every
/// measurement has at least one feasible option.
///
/// Immutable by convention once built; all solvers treat it as read-only.
struct AssignmentProblem {
  int n_meas = 0;
  int n_land = 0;
  std::vector<double> log_lik;       // n_meas * n_land, row-major
  std::vector<double> null_log_lik;  // n_meas
  std::optional<std::vector<int>> truth;  // ground-truth target per measurement
  std::map<std::string, std::string> meta;

  double ll(int k, int j) const { return log_lik[static_cast<size_t>(k) * n_land + j]; }
  double& ll(int k, int j) { return log_lik[static_cast<size_t>(k) * n_land + j]; }

  int max_dim() const { return n_meas > n_land ? n_meas : n_land; }

  /// Throws std::invalid_argument if any type invariant is violated.
  void validate() const;
};

/// An injective partial map from measurements to landmarks. target[k] is the
/// landmark index of measurement k, or kNullTarget. log_prob is the canonical
/// sum of the selected entries, always recomputed in measurement order so
/// equal pair-maps produce bit-identical values.
struct Assignment {
  std::vector<int> target;
  double log_prob = 0.0;

  bool operator==(const Assignment& o) const { return target == o.target; }

  /// Lexicographic order on (measurement index, target index); the
  /// deterministic tie-break used everywhere ranked output is compared.
  bool lex_less(const Assignment& o) const { return target < o.target; }
};

/// Canonical log p(A): entries summed in increasing measurement order.
double assignment_log_prob(const AssignmentProblem& p, const std::vector<int>& target);

/// Structural check (injectivity, index ranges, log_prob consistency).
void validate_assignment(const AssignmentProblem& p, const Assignment& a);

/// The K likeliest assignments in non-increasing log_prob order.
struct RankedAssignmentSet {
  std::vector<Assignment> entries;
  bool exhausted = false;  // true iff the problem had fewer than K assignments

  size_t size() const { return entries.size(); }

  /// log sum of exp(log_prob) over all entries.
  double total_log_mass() const;

  void validate(const AssignmentProblem& p) const;
};

/// Marginal association probabilities. w(k, j) for landmark columns
/// j in [0, n_land); w(k, n_land) is the null marginal. gamma is the
/// certified association error bound (0 for exact tables).
struct MarginalTable {
  int n_meas = 0;
  int n_land = 0;
  std::vector<double> w_bar;  // n_meas * (n_land + 1), row-major
  double gamma = 0.0;
  long k_used = 0;
  double total_log_mass = kNegInf;

  double w(int k, int j) const { return w_bar[static_cast<size_t>(k) * (n_land + 1) + j]; }
  double& w(int k, int j) { return w_bar[static_cast<size_t>(k) * (n_land + 1) + j]; }
  double w_null(int k) const { return w(k, n_land); }

  /// Max absolute per-cell difference against another table (same shape).
  double max_abs_diff(const MarginalTable& o) const;

  void validate() const;
};

}  // namespace semassoc
