#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "semassoc/problem.hpp"
#include "semassoc/rng.hpp"

namespace semassoc::testutil {

/// Random problem with finite entries log-uniform in [-10, 0], a gate
/// probability for -inf entries, and null log-likelihoods in the same range.
inline AssignmentProblem random_problem(Rng& rng, int n_meas, int n_land,
                                        double gate_prob = 0.2) {
  AssignmentProblem p;
  p.n_meas = n_meas;
  p.n_land = n_land;
  p.log_lik.resize(static_cast<size_t>(n_meas) * n_land);
  for (auto& v : p.log_lik) {
    v = rng.bernoulli(gate_prob) ? kNegInf : rng.uniform(-10.0, 0.0);
  }
  p.null_log_lik.resize(n_meas);
  for (auto& v : p.null_log_lik) v = rng.uniform(-10.0, 0.0);
  return p;
}

/// Reference enumeration, written independently of the library's oracle:
/// plain recursion with a std::set of used landmarks, accumulating in
/// long double.
inline void ref_enumerate_rec(const AssignmentProblem& p, int k, std::set<int>& used,
                              std::vector<int>& target,
                              std::vector<std::pair<std::vector<int>, double>>& out) {
  if (k == p.n_meas) {
    long double lp = 0.0L;
    for (int i = 0; i < p.n_meas; ++i) {
      lp += target[i] == kNullTarget ? p.null_log_lik[i] : p.ll(i, target[i]);
    }
    out.emplace_back(target, static_cast<double>(lp));
    return;
  }
  target[k] = kNullTarget;
  ref_enumerate_rec(p, k + 1, used, target, out);
  for (int j = 0; j < p.n_land; ++j) {
    if (used.count(j) || p.ll(k, j) == kNegInf) continue;
    used.insert(j);
    target[k] = j;
    ref_enumerate_rec(p, k + 1, used, target, out);
    used.erase(j);
    target[k] = kNullTarget;
  }
}

inline std::vector<std::pair<std::vector<int>, double>> ref_enumerate(
    const AssignmentProblem& p) {
  std::vector<std::pair<std::vector<int>, double>> out;
  std::vector<int> target(p.n_meas, kNullTarget);
  std::set<int> used;
  ref_enumerate_rec(p, 0, used, target, out);
  return out;
}

/// Ranked by (log_prob descending, pair-map lexicographic ascending).
inline void ref_rank(std::vector<std::pair<std::vector<int>, double>>& all) {
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

/// Reference marginals in long double linear domain (max-shifted).
inline MarginalTable ref_marginals(const AssignmentProblem& p) {
  auto all = ref_enumerate(p);
  MarginalTable t;
  t.n_meas = p.n_meas;
  t.n_land = p.n_land;
  t.w_bar.assign(static_cast<size_t>(p.n_meas) * (p.n_land + 1), 0.0);
  double max_lp = kNegInf;
  for (const auto& [tg, lp] : all) max_lp = std::max(max_lp, lp);
  std::vector<long double> cells(t.w_bar.size(), 0.0L);
  long double total = 0.0L;
  for (const auto& [tg, lp] : all) {
    long double w = std::exp(static_cast<long double>(lp - max_lp));
    total += w;
    for (int k = 0; k < p.n_meas; ++k) {
      int col = tg[k] == kNullTarget ? p.n_land : tg[k];
      cells[static_cast<size_t>(k) * (p.n_land + 1) + col] += w;
    }
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    t.w_bar[i] = static_cast<double>(cells[i] / total);
  }
  t.total_log_mass = max_lp + static_cast<double>(std::log(total));
  t.k_used = static_cast<long>(all.size());
  return t;
}

}  // namespace semassoc::testutil
