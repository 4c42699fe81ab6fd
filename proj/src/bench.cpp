#include "semassoc/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "semassoc/marginals.hpp"
#include "semassoc/murty.hpp"
#include "semassoc/problem_io.hpp"

namespace semassoc {

namespace {

int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

MarginalTable kbest_marginals(const AssignmentProblem& p, long k) {
  return marginals(p, kbest(p, k));
}

}  // namespace

std::string problem_id_of(const AssignmentProblem& p, size_t index) {
  auto it = p.meta.find("id");
  if (it != p.meta.end()) return it->second;
  char buf[24];
  std::snprintf(buf, sizeof(buf), "p%05zu", index);
  return buf;
}

std::vector<TimingRecord> run_bench_timing(const std::vector<AssignmentProblem>& corpus,
                                           const BenchOptions& opts) {
  std::vector<TimingRecord> out;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const AssignmentProblem& p = corpus[i];
    if (p.n_meas == 0) continue;
    TimingRecord base;
    base.problem_id = problem_id_of(p, i);
    base.n_meas = p.n_meas;
    base.n_land = p.n_land;
    base.max_dim = p.max_dim();

    for (long k : opts.k_list) {
      for (int w = 0; w < opts.warmup; ++w) kbest_marginals(p, k);
      int64_t t0 = now_ns();
      MarginalTable t = kbest_marginals(p, k);
      int64_t t1 = now_ns();
      (void)t;
      TimingRecord rec = base;
      rec.method = "kbest-" + std::to_string(k);
      rec.k = k;
      rec.wall_time_ns = t1 - t0;
      out.push_back(std::move(rec));
    }

    if (p.n_meas + p.n_land <= opts.ryser_cap) {
      for (int w = 0; w < opts.warmup; ++w) permanent_marginals(p);
      int64_t t0 = now_ns();
      MarginalTable t = permanent_marginals(p);
      int64_t t1 = now_ns();
      (void)t;
      TimingRecord rec = base;
      rec.method = "ryser-exact";
      rec.k = 0;
      rec.wall_time_ns = t1 - t0;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

namespace {

struct TruthResult {
  bool available = false;
  bool truncated = false;
  double count_estimate = 0.0;
  MarginalTable table;
  double truth_gamma = 0.0;
};

TruthResult compute_truth(const AssignmentProblem& p, const BenchOptions& opts) {
  TruthResult out;
  std::optional<long> count = count_by_dfs(p, opts.budget);
  if (count) {
    EnumerationBudget b;
    b.max_assignments = opts.budget;
    out.table = true_marginals(p, b);
    out.available = true;
    out.count_estimate = static_cast<double>(*count);
    return out;
  }
  out.count_estimate = static_cast<double>(opts.budget) + 1;
  if (opts.top_terms > 0) {
    RankedAssignmentSet ranked = kbest(p, opts.top_terms);
    out.table = marginals(p, ranked);
    out.truth_gamma = out.table.gamma;
    out.available = true;
    out.truncated = true;
  }
  return out;
}

void bench_error_one(const AssignmentProblem& p, size_t index, const BenchOptions& opts,
                     std::vector<ErrorRecord>& records, std::vector<SkippedProblem>& skipped) {
  if (p.n_meas == 0) return;
  TruthResult truth = compute_truth(p, opts);
  std::string id = problem_id_of(p, index);
  if (!truth.available) {
    skipped.push_back({id, truth.count_estimate});
    return;
  }
  for (long k : opts.k_list) {
    int64_t t0 = now_ns();
    RankedAssignmentSet ranked = kbest(p, k);
    MarginalTable approx = marginals(p, ranked);
    int64_t t1 = now_ns();

    ErrorRecord rec;
    rec.problem_id = id;
    rec.k = k;
    rec.n_meas = p.n_meas;
    rec.n_land = p.n_land;
    rec.max_dim = p.max_dim();
    rec.delta = approx.max_abs_diff(truth.table);
    rec.gamma = approx.gamma;
    rec.k_used = approx.k_used;
    rec.wall_time_ns = t1 - t0;
    rec.truncated = truth.truncated;
    double bound = rec.gamma + truth.truth_gamma + 1e-12;
    if (!(rec.delta <= bound)) {
      throw std::logic_error("bench-error: delta " + format_double(rec.delta) +
                             " exceeds gamma bound " + format_double(bound) + " on problem " + id);
    }
    records.push_back(std::move(rec));
  }
}

}  // namespace

ErrorBenchResult run_bench_error(const std::vector<AssignmentProblem>& corpus,
                                 const BenchOptions& opts) {
  ErrorBenchResult result;
  int workers = opts.workers > 1 ? opts.workers : 1;
  if (workers == 1) {
    for (size_t i = 0; i < corpus.size(); ++i) {
      bench_error_one(corpus[i], i, opts, result.records, result.skipped);
    }
    return result;
  }

  // Results are gathered per problem and concatenated in corpus order, so
  // the CSV stays deterministic regardless of scheduling.
  std::vector<std::vector<ErrorRecord>> records(corpus.size());
  std::vector<std::vector<SkippedProblem>> skipped(corpus.size());
  std::vector<std::exception_ptr> errors(workers);
  std::atomic<size_t> next{0};
  auto worker = [&](int wi) {
    try {
      for (size_t i = next.fetch_add(1); i < corpus.size(); i = next.fetch_add(1)) {
        bench_error_one(corpus[i], i, opts, records[i], skipped[i]);
      }
    } catch (...) {
      errors[wi] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int wi = 0; wi < workers; ++wi) pool.emplace_back(worker, wi);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (auto& r : records[i]) result.records.push_back(std::move(r));
    for (auto& s : skipped[i]) result.skipped.push_back(std::move(s));
  }
  return result;
}

std::string timing_csv(const std::vector<TimingRecord>& records) {
  std::string out = "problem_id,method,k,n_meas,n_land,max_dim,wall_time_ns\n";
  for (const auto& r : records) {
    out += r.problem_id + ',' + r.method + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.n_meas) + ',' + std::to_string(r.n_land) + ',' +
           std::to_string(r.max_dim) + ',' + std::to_string(r.wall_time_ns) + '\n';
  }
  return out;
}

std::string error_csv(const std::vector<ErrorRecord>& records) {
  std::string out = "problem_id,k,n_meas,n_land,max_dim,delta,gamma,truncated\n";
  for (const auto& r : records) {
    out += r.problem_id + ',' + std::to_string(r.k) + ',' + std::to_string(r.n_meas) + ',' +
           std::to_string(r.n_land) + ',' + std::to_string(r.max_dim) + ',' +
           format_double(r.delta) + ',' + format_double(r.gamma) + ',' +
           (r.truncated ? "1" : "0") + '\n';
  }
  return out;
}

std::string timing_json(const std::vector<TimingRecord>& records) {
  std::string out = "[";
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (i) out += ',';
    out += "\n  {\"problem_id\":\"" + r.problem_id + "\",\"method\":\"" + r.method +
           "\",\"k\":" + std::to_string(r.k) + ",\"n_meas\":" + std::to_string(r.n_meas) +
           ",\"n_land\":" + std::to_string(r.n_land) + ",\"max_dim\":" + std::to_string(r.max_dim) +
           ",\"wall_time_ns\":" + std::to_string(r.wall_time_ns) + "}";
  }
  out += "\n]\n";
  return out;
}

std::string error_json(const std::vector<ErrorRecord>& records) {
  std::string out = "[";
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (i) out += ',';
    out += "\n  {\"problem_id\":\"" + r.problem_id + "\",\"k\":" + std::to_string(r.k) +
           ",\"n_meas\":" + std::to_string(r.n_meas) + ",\"n_land\":" + std::to_string(r.n_land) +
           ",\"max_dim\":" + std::to_string(r.max_dim) + ",\"delta\":" + format_double(r.delta) +
           ",\"gamma\":" + format_double(r.gamma) +
           ",\"truncated\":" + (r.truncated ? "true" : "false") + "}";
  }
  out += "\n]\n";
  return out;
}

}  // namespace semassoc
