#include "semassoc/lsap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semassoc {

CostMatrix augment(const AssignmentProblem& p) {
  CostMatrix c;
  c.rows = p.n_meas;
  c.cols = p.n_land + p.n_meas;
  c.n_land = p.n_land;
  c.cost.assign(static_cast<size_t>(c.rows) * c.cols, kInfeasibleCost);
  for (int k = 0; k < p.n_meas; ++k) {
    for (int j = 0; j < p.n_land; ++j) {
      double ll = p.ll(k, j);
      if (ll != kNegInf) c.at(k, j) = -ll;
    }
    c.at(k, p.n_land + k) = -p.null_log_lik[k];
  }
  return c;
}

Assignment to_assignment(const AssignmentProblem& p, const LsapSolution& sol) {
  Assignment a;
  a.target.resize(p.n_meas);
  for (int k = 0; k < p.n_meas; ++k) {
    int col = sol.row_to_col[k];
    a.target[k] = col < p.n_land ? col : kNullTarget;
  }
  a.log_prob = assignment_log_prob(p, a.target);
  return a;
}

bool LsapSolver::shortest_path(const CostMatrix& c, int free_row,
                               std::span<const uint8_t> col_active, std::vector<int>& rowsol,
                               std::vector<int>& colsol, std::vector<double>& v) {
  const int cols = c.cols;
  d_.resize(cols);
  pred_.resize(cols);
  collist_.clear();
  collist_.reserve(cols);
  for (int j = 0; j < cols; ++j) {
    if (!col_active[j]) continue;
    collist_.push_back(j);
    d_[j] = c.at(free_row, j) - v[j];
    pred_[j] = free_row;
  }
  if (collist_.empty()) return false;

  const int n_active = static_cast<int>(collist_.size());
  int low = 0, up = 0, last = -1;
  int endofpath = -1;
  double minval = 0.0;

  while (endofpath < 0) {
    if (low == up) {
      // Find the next minimum among unscanned columns; gather ties into
      // [low, up) so equal-cost columns are processed together.
      last = low - 1;
      minval = d_[collist_[up]];
      ++up;
      for (int k = up; k < n_active; ++k) {
        int j = collist_[k];
        double h = d_[j];
        if (h <= minval) {
          if (h < minval) {
            up = low;
            minval = h;
          }
          collist_[k] = collist_[up];
          collist_[up++] = j;
        }
      }
      if (minval >= kInfeasibleBarrier) return false;  // no finite completion
      for (int k = low; k < up; ++k) {
        if (colsol[collist_[k]] < 0) {
          endofpath = collist_[k];
          break;
        }
      }
    }
    if (endofpath >= 0) break;

    // Relax through the row matched to the cheapest scanned column.
    int j1 = collist_[low];
    ++low;
    int i = colsol[j1];
    double h = c.at(i, j1) - v[j1] - minval;
    for (int k = up; k < n_active; ++k) {
      int j = collist_[k];
      double red = c.at(i, j) - v[j] - h;
      if (red < d_[j]) {
        d_[j] = red;
        pred_[j] = i;
        if (red == minval) {
          if (colsol[j] < 0) {
            endofpath = j;
            break;
          }
          collist_[k] = collist_[up];
          collist_[up++] = j;
        }
      }
    }
  }

  for (int k = 0; k <= last; ++k) {
    int j = collist_[k];
    v[j] += d_[j] - minval;
  }

  int i;
  do {
    i = pred_[endofpath];
    colsol[endofpath] = i;
    std::swap(rowsol[i], endofpath);
  } while (i != free_row);
  return true;
}

bool LsapSolver::augment_rows(const CostMatrix& c, std::span<const uint8_t> row_active,
                              std::span<const uint8_t> col_active, std::span<const int> free_rows,
                              std::vector<int>& rowsol, std::vector<int>& colsol,
                              std::vector<double>& v) {
  (void)row_active;
  ++invocations_;
  for (int r : free_rows) {
    if (!shortest_path(c, r, col_active, rowsol, colsol, v)) return false;
  }
  return true;
}

std::optional<LsapSolution> LsapSolver::solve(const CostMatrix& c, const PairList& locks,
                                              const PairList& bans) {
  if (c.rows > c.cols) {
    throw std::invalid_argument("solve_lsap: rows must not exceed cols");
  }
  std::vector<uint8_t> row_active(c.rows, 1), col_active(c.cols, 1);
  std::vector<int> rowsol(c.rows, -1), colsol(c.cols, -1);
  for (const auto& [r, cix] : locks) {
    if (r < 0 || r >= c.rows || cix < 0 || cix >= c.cols) {
      throw std::invalid_argument("solve_lsap: lock out of range");
    }
    if (!row_active[r] || !col_active[cix]) {
      throw std::invalid_argument("solve_lsap: locks not pairwise disjoint");
    }
    row_active[r] = 0;
    col_active[cix] = 0;
    rowsol[r] = cix;
    colsol[cix] = r;
  }
  for (const auto& [r, cix] : bans) {
    if (r < 0 || r >= c.rows || cix < 0 || cix >= c.cols) {
      throw std::invalid_argument("solve_lsap: ban out of range");
    }
    for (const auto& lock : locks) {
      if (lock.first == r && lock.second == cix) {
        throw std::invalid_argument("solve_lsap: pair both locked and banned");
      }
    }
  }

  // Bans are applied by rewriting the working copy; restore is not needed
  // since the copy is local to this solve.
  CostMatrix work = c;
  for (const auto& [r, cix] : bans) work.at(r, cix) = kInfeasibleCost;

  std::vector<int> free_rows;
  for (int r = 0; r < c.rows; ++r) {
    if (row_active[r]) free_rows.push_back(r);
  }
  std::vector<double> v(c.cols, 0.0);
  if (!augment_rows(work, row_active, col_active, free_rows, rowsol, colsol, v)) {
    return std::nullopt;
  }

  LsapSolution sol;
  sol.row_to_col = rowsol;
  for (int r = 0; r < c.rows; ++r) {
    double edge = work.at(r, rowsol[r]);
    if (edge >= kInfeasibleBarrier) return std::nullopt;
    sol.total_cost += c.at(r, rowsol[r]);
  }
  return sol;
}

std::optional<LsapSolution> solve_lsap(const CostMatrix& c, const PairList& locks,
                                       const PairList& bans) {
  LsapSolver solver;
  return solver.solve(c, locks, bans);
}

}  // namespace semassoc
