#include "semassoc/problem.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace semassoc {

void AssignmentProblem::validate() const {
  if (n_meas < 0 || n_land < 0) {
    throw std::invalid_argument("AssignmentProblem: negative dimension");
  }
  if (log_lik.size() != static_cast<size_t>(n_meas) * n_land) {
    throw std::invalid_argument("AssignmentProblem: log_lik shape mismatch");
  }
  if (null_log_lik.size() != static_cast<size_t>(n_meas)) {
    throw std::invalid_argument("AssignmentProblem: null_log_lik length mismatch");
  }
  for (double v : log_lik) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("AssignmentProblem: log_lik entry must be finite or -inf");
    }
  }
  for (double v : null_log_lik) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("AssignmentProblem: null_log_lik entry must be finite");
    }
  }
  if (truth) {
    if (truth->size() != static_cast<size_t>(n_meas)) {
      throw std::invalid_argument("AssignmentProblem: truth length mismatch");
    }
    std::set<int> used;
    for (int t : *truth) {
      if (t < kNullTarget || t >= n_land) {
        throw std::invalid_argument("AssignmentProblem: truth target out of range");
      }
      if (t != kNullTarget && !used.insert(t).second) {
        throw std::invalid_argument("AssignmentProblem: truth assigns a landmark twice");
      }
    }
  }
}

double assignment_log_prob(const AssignmentProblem& p, const std::vector<int>& target) {
  double sum = 0.0;
  for (int k = 0; k < p.n_meas; ++k) {
    sum += target[k] == kNullTarget ? p.null_log_lik[k] : p.ll(k, target[k]);
  }
  return sum;
}

void validate_assignment(const AssignmentProblem& p, const Assignment& a) {
  if (a.target.size() != static_cast<size_t>(p.n_meas)) {
    throw std::invalid_argument("Assignment: wrong number of measurements");
  }
  std::set<int> used;
  for (int t : a.target) {
    if (t < kNullTarget || t >= p.n_land) {
      throw std::invalid_argument("Assignment: target out of range");
    }
    if (t != kNullTarget && !used.insert(t).second) {
      throw std::invalid_argument("Assignment: landmark assigned twice");
    }
  }
  double expect = assignment_log_prob(p, a.target);
  if (expect == kNegInf && a.log_prob == kNegInf) return;
  if (!(std::abs(expect - a.log_prob) <= 1e-12 * std::max(1.0, std::abs(expect)))) {
    throw std::invalid_argument("Assignment: log_prob does not match recomputed sum");
  }
}

double RankedAssignmentSet::total_log_mass() const {
  std::vector<double> lps;
  lps.reserve(entries.size());
  for (const auto& a : entries) lps.push_back(a.log_prob);
  return lps.empty() ? kNegInf : log_sum_exp(lps);
}

void RankedAssignmentSet::validate(const AssignmentProblem& p) const {
  for (size_t i = 0; i < entries.size(); ++i) {
    validate_assignment(p, entries[i]);
    if (i > 0 && !(entries[i - 1].log_prob >= entries[i].log_prob)) {
      throw std::invalid_argument("RankedAssignmentSet: out of order");
    }
    for (size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i] == entries[j]) {
        throw std::invalid_argument("RankedAssignmentSet: duplicate assignment");
      }
    }
  }
}

double MarginalTable::max_abs_diff(const MarginalTable& o) const {
  if (o.w_bar.size() != w_bar.size()) {
    throw std::invalid_argument("MarginalTable: shape mismatch");
  }
  double m = 0.0;
  for (size_t i = 0; i < w_bar.size(); ++i) {
    double d = std::abs(w_bar[i] - o.w_bar[i]);
    if (d > m) m = d;
  }
  return m;
}

void MarginalTable::validate() const {
  if (w_bar.size() != static_cast<size_t>(n_meas) * (n_land + 1)) {
    throw std::invalid_argument("MarginalTable: shape mismatch");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("MarginalTable: gamma outside [0, 1]");
  }
  for (int k = 0; k < n_meas; ++k) {
    double row_sum = 0.0;
    for (int j = 0; j <= n_land; ++j) {
      double v = w(k, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("MarginalTable: entry outside [0, 1]");
      }
      row_sum += v;
    }
    if (std::abs(row_sum - 1.0) > 1e-9) {
      throw std::invalid_argument("MarginalTable: row does not sum to 1");
    }
  }
}

}  // namespace semassoc
