#pragma once

#include "semassoc/problem.hpp"

namespace semassoc {

/// {0,1} pattern of the null-augmented cost matrix. The permanent of its
/// square completion counts assignments, which is what the error bound needs.
struct FeasibilityMatrix {
  int n_meas = 0;
  int n_land = 0;
  std::vector<uint8_t> zero_one;  // n_meas x (n_land + n_meas), row-major
  std::vector<int> row_degrees;   // feasible landmark count + own null, per row

  bool at(int k, int j) const {
    return zero_one[static_cast<size_t>(k) * (n_land + n_meas) + j] != 0;
  }
};

FeasibilityMatrix feasibility(const AssignmentProblem& p);

/// log of an upper bound on the total number of assignments: the minimum of
/// the independent-choice bound prod_k (f_k + 1) and the Bregman-Minc
/// permanent bound applied to the square completion of the feasibility
/// pattern (dummy all-ones rows added, then divided by m!).
double count_bound_log(const FeasibilityMatrix& f);

/// Association error bound gamma in [0, 1]: with N_rem = max(0, N - K)
/// remaining assignments, each bounded by p(A_K), beta = N_rem * p(A_K) and
/// gamma = beta / (beta + sum of enumerated mass), evaluated as a sigmoid in
/// log domain. Zero when the enumeration is exhausted or the bound proves
/// nothing remains.
double error_bound(const RankedAssignmentSet& ranked, const FeasibilityMatrix& f);

/// Approximate marginals over the ranked set: w(k, j) =
/// exp(LSE of log p(A) over entries with A(k)=j, minus LSE over all
/// entries), with gamma attached via error_bound.
MarginalTable marginals(const AssignmentProblem& p, const RankedAssignmentSet& ranked);

}  // namespace semassoc
