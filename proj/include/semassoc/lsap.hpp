#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "semassoc/problem.hpp"

namespace semassoc {

/// Cost used for forbidden pairs. Kept finite so dual arithmetic never
/// produces inf - inf; any path or edge at or above kInfeasibleCost / 2 is
/// treated as infeasible.
inline constexpr double kInfeasibleCost = 1e100;
inline constexpr double kInfeasibleBarrier = kInfeasibleCost / 2;

/// Null-augmented cost matrix. rows = n_meas; cols = n_land + n_meas.
/// Landmark columns hold -log_lik; column n_land + k holds -null_log_lik[k]
/// for row k and kInfeasibleCost for every other row, so minimizing total
/// cost is exactly maximizing Assignment::log_prob.
struct CostMatrix {
  int rows = 0;
  int cols = 0;
  int n_land = 0;  // cols - rows for augmented matrices
  std::vector<double> cost;  // row-major

  double at(int r, int c) const { return cost[static_cast<size_t>(r) * cols + c]; }
  double& at(int r, int c) { return cost[static_cast<size_t>(r) * cols + c]; }
};

CostMatrix augment(const AssignmentProblem& p);

/// A complete row matching of a CostMatrix: row_to_col[r] is the column of
/// row r; total_cost the sum of matched entries.
struct LsapSolution {
  std::vector<int> row_to_col;
  double total_cost = 0.0;
};

/// Maps a matching of augment(p) back to the domain Assignment.
Assignment to_assignment(const AssignmentProblem& p, const LsapSolution& sol);

using PairList = std::vector<std::pair<int, int>>;

/// Shortest-augmenting-path LSAP solver (Jonker-Volgenant style augmentation
/// with column potentials). Handles rectangular matrices with rows <= cols
/// natively and supports warm starts from an inherited matching and duals,
/// which is what makes the Murty loop cheap.
///
/// Owns scratch buffers: one instance must not be shared mid-solve, distinct
/// instances are independent.
class LsapSolver {
 public:
  /// Minimum-cost row-complete column-injective matching, honoring locks
  /// (pair forced in) and bans (pair treated as infeasible). Returns nullopt
  /// iff no complete matching of finite cost exists. Throws
  /// std::invalid_argument on contradictory locks/bans or rows > cols.
  std::optional<LsapSolution> solve(const CostMatrix& c, const PairList& locks = {},
                                    const PairList& bans = {});

  /// Number of solves/augmentation passes performed, for instrumentation.
  long invocations() const { return invocations_; }

  // Warm-start interface used by the k-best enumerator. `cost` must already
  // have bans applied; row_active/col_active exclude locked pairs. rowsol,
  // colsol and v carry the inherited state and are updated in place. Each
  // row in free_rows gets one shortest augmenting path; returns false as
  // soon as some row cannot be matched at finite cost.
  bool augment_rows(const CostMatrix& c, std::span<const uint8_t> row_active,
                    std::span<const uint8_t> col_active, std::span<const int> free_rows,
                    std::vector<int>& rowsol, std::vector<int>& colsol, std::vector<double>& v);

 private:
  bool shortest_path(const CostMatrix& c, int free_row, std::span<const uint8_t> col_active,
                     std::vector<int>& rowsol, std::vector<int>& colsol, std::vector<double>& v);

  std::vector<double> d_;
  std::vector<int> pred_;
  std::vector<int> collist_;
  long invocations_ = 0;
};

/// One-shot convenience wrapper around LsapSolver::solve.
std::optional<LsapSolution> solve_lsap(const CostMatrix& c, const PairList& locks = {},
                                       const PairList& bans = {});

}  // namespace semassoc
