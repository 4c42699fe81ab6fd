#include "semassoc/marginals.hpp"

#include <cmath>
#include <stdexcept>

namespace semassoc {

FeasibilityMatrix feasibility(const AssignmentProblem& p) {
  FeasibilityMatrix f;
  f.n_meas = p.n_meas;
  f.n_land = p.n_land;
  int cols = p.n_land + p.n_meas;
  f.zero_one.assign(static_cast<size_t>(p.n_meas) * cols, 0);
  f.row_degrees.assign(p.n_meas, 0);
  for (int k = 0; k < p.n_meas; ++k) {
    int deg = 1;  // own null column
    for (int j = 0; j < p.n_land; ++j) {
      if (p.ll(k, j) != kNegInf) {
        f.zero_one[static_cast<size_t>(k) * cols + j] = 1;
        ++deg;
      }
    }
    f.zero_one[static_cast<size_t>(k) * cols + p.n_land + k] = 1;
    f.row_degrees[k] = deg;
  }
  return f;
}

namespace {

// log((r!)^(1/r)), the per-row Bregman-Minc factor.
double minc_row_factor(int r) { return r <= 1 ? 0.0 : std::lgamma(r + 1.0) / r; }

}  // namespace

double count_bound_log(const FeasibilityMatrix& f) {
  double independent = 0.0;
  for (int deg : f.row_degrees) independent += std::log(static_cast<double>(deg));

  // Square completion: C = n_land + n_meas columns, m = n_land dummy
  // all-ones rows; exact count = perm(square) / m!.
  int cols = f.n_land + f.n_meas;
  double minc = 0.0;
  for (int deg : f.row_degrees) minc += minc_row_factor(deg);
  minc += f.n_land * minc_row_factor(cols);
  minc -= std::lgamma(f.n_land + 1.0);

  return independent < minc ? independent : minc;
}

double error_bound(const RankedAssignmentSet& ranked, const FeasibilityMatrix& f) {
  if (ranked.entries.empty()) {
    throw std::invalid_argument("error_bound: empty ranked set");
  }
  if (ranked.exhausted) return 0.0;

  double log_n = count_bound_log(f);
  double k = static_cast<double>(ranked.size());
  double log_n_rem;
  if (log_n < 36.0) {  // exp(36) < 2^53, the subtraction is exact
    double n_rem = std::exp(log_n) - k;
    if (n_rem <= 0.0) return 0.0;
    log_n_rem = std::log(n_rem);
  } else {
    log_n_rem = log_n + std::log1p(-k * std::exp(-log_n));
  }

  double log_beta = log_n_rem + ranked.entries.back().log_prob;
  double x = log_beta - ranked.total_log_mass();
  // sigmoid(x), stable for both signs
  double gamma = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  if (gamma < 0.0) gamma = 0.0;
  if (gamma > 1.0) gamma = 1.0;
  return gamma;
}

MarginalTable marginals(const AssignmentProblem& p, const RankedAssignmentSet& ranked) {
  MarginalTable t;
  t.n_meas = p.n_meas;
  t.n_land = p.n_land;
  t.k_used = static_cast<long>(ranked.size());
  const int width = p.n_land + 1;
  t.w_bar.assign(static_cast<size_t>(p.n_meas) * width, 0.0);
  if (p.n_meas == 0) {
    t.total_log_mass = 0.0;
    return t;
  }
  if (ranked.entries.empty()) {
    throw std::invalid_argument("marginals: empty ranked set");
  }

  auto cell = [&](int k, int target) {
    return static_cast<size_t>(k) * width + (target == kNullTarget ? p.n_land : target);
  };

  // Per-cell log-sum-exp in two passes: cell maxima, then shifted sums.
  std::vector<double> cell_max(t.w_bar.size(), kNegInf);
  for (const Assignment& a : ranked.entries) {
    for (int k = 0; k < p.n_meas; ++k) {
      size_t c = cell(k, a.target[k]);
      if (a.log_prob > cell_max[c]) cell_max[c] = a.log_prob;
    }
  }
  std::vector<double> cell_sum(t.w_bar.size(), 0.0);
  for (const Assignment& a : ranked.entries) {
    for (int k = 0; k < p.n_meas; ++k) {
      size_t c = cell(k, a.target[k]);
      cell_sum[c] += std::exp(a.log_prob - cell_max[c]);
    }
  }

  t.total_log_mass = ranked.total_log_mass();
  for (size_t c = 0; c < t.w_bar.size(); ++c) {
    if (cell_max[c] == kNegInf) continue;
    double w = std::exp(cell_max[c] + std::log(cell_sum[c]) - t.total_log_mass);
    t.w_bar[c] = w > 1.0 ? 1.0 : w;
  }

  t.gamma = error_bound(ranked, feasibility(p));
  return t;
}

}  // namespace semassoc
