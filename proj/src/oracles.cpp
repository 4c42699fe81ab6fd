#include "semassoc/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <vector>

namespace semassoc {

namespace {

// Depth-first walk over all injective partial maps. Landmark usage is a
// bitmask, so n_land is limited to 64 here; problems beyond that are far
// outside any enumerable budget anyway.
template <typename Fn>
bool dfs_assignments(const AssignmentProblem& p, int k, uint64_t used, std::vector<int>& target,
                     double log_prob, const Fn& fn) {
  if (k == p.n_meas) return fn(target, log_prob);
  // null option
  target[k] = kNullTarget;
  if (!dfs_assignments(p, k + 1, used, target, log_prob + p.null_log_lik[k], fn)) return false;
  for (int j = 0; j < p.n_land; ++j) {
    if (used & (1ULL << j)) continue;
    double ll = p.ll(k, j);
    if (ll == kNegInf) continue;
    target[k] = j;
    if (!dfs_assignments(p, k + 1, used | (1ULL << j), target, log_prob + ll, fn)) return false;
  }
  target[k] = kNullTarget;
  return true;
}

void require_enumerable(const AssignmentProblem& p) {
  if (p.n_land > 63) {
    throw BudgetExceeded("enumerate: n_land too large for enumeration", -1.0);
  }
}

}  // namespace

std::optional<long> count_by_dfs(const AssignmentProblem& p, long cap) {
  require_enumerable(p);
  long count = 0;
  std::vector<int> target(p.n_meas, kNullTarget);
  bool complete = dfs_assignments(p, 0, 0, target, 0.0, [&](const std::vector<int>&, double) {
    ++count;
    return count <= cap;
  });
  if (!complete) return std::nullopt;
  return count;
}

namespace {

void check_budget(const AssignmentProblem& p, const EnumerationBudget& b) {
  if (!count_by_dfs(p, b.max_assignments)) {
    throw BudgetExceeded("enumerate: assignment count exceeds budget of " +
                             std::to_string(b.max_assignments),
                         static_cast<double>(b.max_assignments) + 1);
  }
}

template <typename Fn>
void walk(const AssignmentProblem& p, const Fn& fn) {
  std::vector<int> target(p.n_meas, kNullTarget);
  dfs_assignments(p, 0, 0, target, 0.0, [&](const std::vector<int>& t, double lp) {
    fn(t, lp);
    return true;
  });
}

}  // namespace

void enumerate_visit(const AssignmentProblem& p, const EnumerationBudget& b,
                     const std::function<void(const std::vector<int>&, double)>& visit) {
  check_budget(p, b);
  walk(p, visit);
}

std::vector<Assignment> enumerate_all(const AssignmentProblem& p, const EnumerationBudget& b) {
  std::vector<Assignment> out;
  enumerate_visit(p, b, [&](const std::vector<int>& t, double lp) { out.push_back({t, lp}); });
  return out;
}

MarginalTable true_marginals(const AssignmentProblem& p, const EnumerationBudget& b) {
  MarginalTable t;
  t.n_meas = p.n_meas;
  t.n_land = p.n_land;
  const int width = p.n_land + 1;
  t.w_bar.assign(static_cast<size_t>(p.n_meas) * width, 0.0);
  if (p.n_meas == 0) {
    t.total_log_mass = 0.0;
    return t;
  }

  auto cell = [&](int k, int target) {
    return static_cast<size_t>(k) * width + (target == kNullTarget ? p.n_land : target);
  };

  check_budget(p, b);
  long count = 0;
  if (!b.top_terms) {
    // Two passes: per-cell maxima, then shifted sums; exact per-cell LSE
    // without storing the enumeration.
    std::vector<double> cell_max(t.w_bar.size(), kNegInf);
    double global_max = kNegInf;
    walk(p, [&](const std::vector<int>& tg, double lp) {
      ++count;
      if (lp > global_max) global_max = lp;
      for (int k = 0; k < p.n_meas; ++k) {
        size_t c = cell(k, tg[k]);
        if (lp > cell_max[c]) cell_max[c] = lp;
      }
    });
    std::vector<double> cell_sum(t.w_bar.size(), 0.0);
    double total = 0.0;
    walk(p, [&](const std::vector<int>& tg, double lp) {
      total += std::exp(lp - global_max);
      for (int k = 0; k < p.n_meas; ++k) {
        size_t c = cell(k, tg[k]);
        cell_sum[c] += std::exp(lp - cell_max[c]);
      }
    });
    t.total_log_mass = global_max + std::log(total);
    for (size_t c = 0; c < t.w_bar.size(); ++c) {
      if (cell_max[c] == kNegInf) continue;
      double w = std::exp(cell_max[c] + std::log(cell_sum[c]) - t.total_log_mass);
      t.w_bar[c] = w > 1.0 ? 1.0 : w;
    }
  } else {
    // Truncated truth: each cell numerator keeps only its T largest terms.
    long cap = std::max<long>(1, *b.top_terms);
    using MinHeap = std::priority_queue<double, std::vector<double>, std::greater<double>>;
    std::vector<MinHeap> heaps(t.w_bar.size());
    double global_max = kNegInf;
    walk(p, [&](const std::vector<int>& tg, double lp) {
      ++count;
      if (lp > global_max) global_max = lp;
      for (int k = 0; k < p.n_meas; ++k) {
        MinHeap& h = heaps[cell(k, tg[k])];
        if (static_cast<long>(h.size()) < cap) {
          h.push(lp);
        } else if (lp > h.top()) {
          h.pop();
          h.push(lp);
        }
      }
    });
    double total = 0.0;
    walk(p, [&](const std::vector<int>&, double lp) { total += std::exp(lp - global_max); });
    t.total_log_mass = global_max + std::log(total);
    for (size_t c = 0; c < t.w_bar.size(); ++c) {
      std::vector<double> terms;
      MinHeap& h = heaps[c];
      while (!h.empty()) {
        terms.push_back(h.top());
        h.pop();
      }
      if (terms.empty()) continue;
      double w = std::exp(log_sum_exp(terms) - t.total_log_mass);
      t.w_bar[c] = w > 1.0 ? 1.0 : w;
    }
  }

  t.k_used = count;
  t.gamma = 0.0;
  return t;
}

namespace {

// Gray-code Ryser walk over all non-empty column subsets with incremental
// row sums, a sign of (-1)^(dim - |S|), and periodic exact rebuilds of the
// row sums to stop incremental drift. Returns log of the alternating total.
template <typename Acc>
double ryser_core(const std::vector<long double>& a, int dim) {
  auto mag = [](Acc x) { return x < Acc(0) ? -x : x; };
  std::vector<Acc> row_sum(dim, Acc(0));
  Acc total(0), comp(0);
  uint64_t gray = 0;
  int popcount = 0;
  const uint64_t n_subsets = 1ULL << dim;
  for (uint64_t iter = 1; iter < n_subsets; ++iter) {
    uint64_t next_gray = iter ^ (iter >> 1);
    uint64_t changed = next_gray ^ gray;
    int j = std::countr_zero(changed);
    bool added = next_gray & changed;
    gray = next_gray;
    popcount += added ? 1 : -1;
    if ((iter & 0xFFF) == 0) {
      for (int i = 0; i < dim; ++i) {
        Acc s(0);
        for (int jj = 0; jj < dim; ++jj) {
          if (gray & (1ULL << jj)) s += Acc(a[static_cast<size_t>(i) * dim + jj]);
        }
        row_sum[i] = s;
      }
    } else if (added) {
      for (int i = 0; i < dim; ++i) row_sum[i] += Acc(a[static_cast<size_t>(i) * dim + j]);
    } else {
      for (int i = 0; i < dim; ++i) row_sum[i] -= Acc(a[static_cast<size_t>(i) * dim + j]);
    }

    Acc prod(1);
    for (int i = 0; i < dim; ++i) prod *= row_sum[i];
    if (((dim - popcount) & 1) != 0) prod = -prod;

    // Neumaier-compensated alternating accumulation.
    Acc t = total + prod;
    comp += mag(total) >= mag(prod) ? (total - t) + prod : (prod - t) + total;
    total = t;
  }
  long double result = static_cast<long double>(total + comp);
  if (!(result > 0.0L)) return kNegInf;
  return static_cast<double>(std::log(result));
}

}  // namespace

double permanent_ryser_log(const std::vector<double>& m, int dim) {
  if (dim < 0 || m.size() != static_cast<size_t>(dim) * dim) {
    throw std::invalid_argument("permanent_ryser: matrix is not square");
  }
  if (dim > 30) {
    throw BudgetExceeded("permanent_ryser: dimension > 30", std::pow(2.0, dim));
  }
  if (dim == 0) return 0.0;  // perm of the empty matrix is 1
  for (double v : m) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("permanent_ryser: entries must be finite and non-negative");
    }
  }

  // Single global rescale keeps row-sum products inside range.
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, v);
  if (scale == 0.0) return kNegInf;  // zero matrix

  std::vector<long double> a(m.size());
  for (size_t i = 0; i < m.size(); ++i) a[i] = static_cast<long double>(m[i] / scale);

  // The alternating sum cancels several orders of magnitude on small
  // ill-conditioned inputs; quad precision buys the 1e-9 relative accuracy
  // contract there at negligible cost. Larger dimensions dominate runtime,
  // so they stay on extended precision.
#if defined(__SIZEOF_FLOAT128__)
  double log_total = dim <= 14 ? ryser_core<__float128>(a, dim) : ryser_core<long double>(a, dim);
#else
  double log_total = ryser_core<long double>(a, dim);
#endif
  if (log_total == kNegInf) return kNegInf;
  return dim * std::log(scale) + log_total;
}

namespace {

// Square completion of the likelihood matrix: n_meas real rows (entries
// exp(l - row max), zero where gated) over n_land + n_meas columns, plus
// n_land all-ones dummy rows. Real-row shifts cancel in the marginal ratios.
struct SquareCompletion {
  int dim;
  std::vector<double> m;
  std::vector<double> row_shift;
};

SquareCompletion square_completion(const AssignmentProblem& p) {
  SquareCompletion s;
  s.dim = p.n_land + p.n_meas;
  s.m.assign(static_cast<size_t>(s.dim) * s.dim, 0.0);
  s.row_shift.assign(p.n_meas, 0.0);
  for (int k = 0; k < p.n_meas; ++k) {
    double shift = p.null_log_lik[k];
    for (int j = 0; j < p.n_land; ++j) shift = std::max(shift, p.ll(k, j));
    s.row_shift[k] = shift;
    for (int j = 0; j < p.n_land; ++j) {
      double ll = p.ll(k, j);
      if (ll != kNegInf) s.m[static_cast<size_t>(k) * s.dim + j] = std::exp(ll - shift);
    }
    s.m[static_cast<size_t>(k) * s.dim + p.n_land + k] = std::exp(p.null_log_lik[k] - shift);
  }
  for (int r = p.n_meas; r < s.dim; ++r) {
    for (int j = 0; j < s.dim; ++j) s.m[static_cast<size_t>(r) * s.dim + j] = 1.0;
  }
  return s;
}

std::vector<double> minor_of(const std::vector<double>& m, int dim, int row, int col) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(dim - 1) * (dim - 1));
  for (int r = 0; r < dim; ++r) {
    if (r == row) continue;
    for (int c = 0; c < dim; ++c) {
      if (c == col) continue;
      out.push_back(m[static_cast<size_t>(r) * dim + c]);
    }
  }
  return out;
}

}  // namespace

MarginalTable permanent_marginals(const AssignmentProblem& p) {
  MarginalTable t;
  t.n_meas = p.n_meas;
  t.n_land = p.n_land;
  const int width = p.n_land + 1;
  t.w_bar.assign(static_cast<size_t>(p.n_meas) * width, 0.0);
  if (p.n_meas == 0) {
    t.total_log_mass = 0.0;
    return t;
  }
  SquareCompletion s = square_completion(p);
  if (s.dim > 30) {
    throw BudgetExceeded("permanent_marginals: square completion dimension > 30",
                         static_cast<double>(s.dim));
  }

  double log_perm_full = permanent_ryser_log(s.m, s.dim);
  for (int k = 0; k < p.n_meas; ++k) {
    for (int j = 0; j <= p.n_land; ++j) {
      int col = j < p.n_land ? j : p.n_land + k;
      double ll = j < p.n_land ? p.ll(k, j) : p.null_log_lik[k];
      if (ll == kNegInf) continue;
      double log_minor = permanent_ryser_log(minor_of(s.m, s.dim, k, col), s.dim - 1);
      double w = std::exp((ll - s.row_shift[k]) + log_minor - log_perm_full);
      t.w(k, j) = w > 1.0 ? 1.0 : w;
    }
  }

  // log Z for diagnostics: perm(full) = m! * Z in the shifted domain.
  double shift_sum = 0.0;
  for (double v : s.row_shift) shift_sum += v;
  t.total_log_mass = log_perm_full - std::lgamma(p.n_land + 1.0) + shift_sum;
  t.gamma = 0.0;
  return t;
}

uint64_t count_exact(const AssignmentProblem& p) {
  if (p.n_land > 20) {
    throw BudgetExceeded("count_exact: n_land > 20", -1.0);
  }
  const uint64_t n_masks = 1ULL << p.n_land;
  std::vector<unsigned __int128> dp(n_masks, 0), next(n_masks, 0);
  dp[0] = 1;
  for (int k = 0; k < p.n_meas; ++k) {
    std::fill(next.begin(), next.end(), 0);
    for (uint64_t mask = 0; mask < n_masks; ++mask) {
      unsigned __int128 ways = dp[mask];
      if (ways == 0) continue;
      next[mask] += ways;  // null option
      for (int j = 0; j < p.n_land; ++j) {
        if (mask & (1ULL << j)) continue;
        if (p.ll(k, j) == kNegInf) continue;
        next[mask | (1ULL << j)] += ways;
      }
    }
    dp.swap(next);
  }
  unsigned __int128 total = 0;
  for (auto v : dp) total += v;
  if (total > static_cast<unsigned __int128>(1'000'000'000'000ULL)) {
    throw BudgetExceeded("count_exact: count exceeds 10^12", 1e12);
  }
  return static_cast<uint64_t>(total);
}

}  // namespace semassoc
