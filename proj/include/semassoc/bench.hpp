#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semassoc/oracles.hpp"
#include "semassoc/problem.hpp"

namespace semassoc {

struct TimingRecord {
  std::string problem_id;
  std::string method;  // "kbest-<K>" or "ryser-exact"
  long k = 0;          // 0 for ryser-exact
  int n_meas = 0;
  int n_land = 0;
  int max_dim = 0;
  int64_t wall_time_ns = 0;
};

/// Worst-case marginal error of one (problem, K) run against the truth,
/// delta = max_{k,j} |w_kj - w_bar_kj| over all cells including the null
/// column. delta <= gamma is asserted when the record is created (the
/// truncated-truth fallback adds the truth's own bound to the right side).
struct ErrorRecord {
  std::string problem_id;
  long k = 0;
  int n_meas = 0;
  int n_land = 0;
  int max_dim = 0;
  double delta = 0.0;
  double gamma = 0.0;
  long k_used = 0;
  int64_t wall_time_ns = 0;
  bool truncated = false;
};

struct BenchOptions {
  std::vector<long> k_list{200};
  long budget = 10'000'000;   // max enumerable assignments for the truth
  long top_terms = 20'000;    // truncated-truth fallback size; 0 disables
  int ryser_cap = 25;         // max square-completion dim for ryser-exact
  int warmup = 0;             // untimed repetitions before the measurement
  int workers = 1;            // bench-error only; timing is always sequential
};

struct SkippedProblem {
  std::string problem_id;
  double count_estimate = 0.0;
};

struct ErrorBenchResult {
  std::vector<ErrorRecord> records;
  std::vector<SkippedProblem> skipped;
};

/// Times the marginal computation (enumeration + weights) per problem and
/// method; problem construction and parsing are outside the clock.
/// Measurements run sequentially on one worker so they are uncontended.
std::vector<TimingRecord> run_bench_timing(const std::vector<AssignmentProblem>& corpus,
                                           const BenchOptions& opts);

/// Error study: per problem, exact truth by enumeration when the assignment
/// count fits the budget, otherwise the truncated-truth fallback (marginals
/// of the top_terms likeliest assignments, record marked truncated); then
/// one ErrorRecord per K.
ErrorBenchResult run_bench_error(const std::vector<AssignmentProblem>& corpus,
                                 const BenchOptions& opts);

std::string timing_csv(const std::vector<TimingRecord>& records);
std::string error_csv(const std::vector<ErrorRecord>& records);
std::string timing_json(const std::vector<TimingRecord>& records);
std::string error_json(const std::vector<ErrorRecord>& records);

/// problem_id from meta (falls back to a zero-padded corpus index).
std::string problem_id_of(const AssignmentProblem& p, size_t index);

}  // namespace semassoc
