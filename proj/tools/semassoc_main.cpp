#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semassoc/bench.hpp"
#include "semassoc/marginals.hpp"
#include "semassoc/murty.hpp"
#include "semassoc/oracles.hpp"
#include "semassoc/problem_io.hpp"
#include "semassoc/scenario.hpp"
#include "semassoc/svg.hpp"

using namespace semassoc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct SharedOpts {
  std::optional<uint64_t> seed;
  std::vector<long> k_list{200};
  std::string out;
  std::string format = "csv";
  std::string svg;
  long budget = 10'000'000;
  long top_terms = 20'000;
  double null_cost = -8.0;
  double gate = 50.0;
  int workers = 1;
  int warmup = 0;
  int ryser_cap = 25;
};

void add_shared(CLI::App* cmd, SharedOpts& o) {
  cmd->add_option("--seed", o.seed, "Override the scenario seed");
  cmd->add_option("--k", o.k_list, "K values for the k-best enumeration")->delimiter(',');
  cmd->add_option("--out", o.out, "Output path (default: stdout)");
  cmd->add_option("--format", o.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--svg", o.svg, "Also render an SVG figure to this path");
  cmd->add_option("--budget", o.budget, "Max enumerable assignments for exact truth");
  cmd->add_option("--top-terms", o.top_terms,
                  "Truncated-truth fallback size when the budget is exceeded (0 disables)");
  cmd->add_option("--null-cost", o.null_cost, "Null association log-likelihood");
  cmd->add_option("--gate", o.gate, "Distance gate; pairs beyond it are infeasible");
  cmd->add_option("--workers", o.workers, "Worker threads (bench-error only)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--warmup", o.warmup, "Untimed repetitions before each timing measurement");
  cmd->add_option("--ryser-cap", o.ryser_cap,
                  "Max square-completion dimension for ryser-exact timing rows");
}

void emit(const std::string& path, const std::string& bytes) {
  if (path.empty()) {
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
  } else {
    write_file(path, bytes);
  }
}

AssignmentProblem load_problem(const std::string& path, int index) {
  auto corpus = corpus_read_file(path);
  if (corpus.empty()) throw ParseError(path + ": no problems found");
  if (index < 0 || index >= static_cast<int>(corpus.size())) {
    throw ParseError(path + ": problem index " + std::to_string(index) + " out of range (" +
                     std::to_string(corpus.size()) + " problems)");
  }
  return corpus[static_cast<size_t>(index)];
}

void print_table(std::FILE* f, const AssignmentProblem& p, const MarginalTable& t) {
  std::fprintf(f, "%-6s", "meas");
  for (int j = 0; j < p.n_land; ++j) std::fprintf(f, " %9s", ("L" + std::to_string(j)).c_str());
  std::fprintf(f, " %9s\n", "NULL");
  for (int k = 0; k < p.n_meas; ++k) {
    std::fprintf(f, "%-6d", k);
    for (int j = 0; j <= p.n_land; ++j) std::fprintf(f, " %9.6f", t.w(k, j));
    std::fprintf(f, "\n");
  }
}

int cmd_gen(const SharedOpts& o, const std::string& config_path) {
  std::string config = config_path.empty() ? default_demo_config() : read_file(config_path);
  Scenario s = scenario_from_json(config);
  if (o.seed) s.seed = *o.seed;
  auto corpus = generate_corpus(s, o.null_cost, o.gate);
  emit(o.out, corpus_write(corpus));
  std::fprintf(stderr, "gen: %zu problems from %zu frames (scenario \"%s\", seed %llu)\n",
               corpus.size(), s.trajectory.size(), s.name.c_str(),
               static_cast<unsigned long long>(s.seed));
  return kExitOk;
}

int cmd_solve(const SharedOpts& o, const std::string& path, int index, bool with_oracle) {
  AssignmentProblem p = load_problem(path, index);
  long k = o.k_list.empty() ? 200 : o.k_list.front();

  auto t0 = std::chrono::steady_clock::now();
  RankedAssignmentSet ranked = kbest(p, k);
  MarginalTable table = marginals(p, ranked);
  auto t1 = std::chrono::steady_clock::now();
  int64_t ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();

  std::optional<MarginalTable> truth;
  if (with_oracle) {
    EnumerationBudget b;
    b.max_assignments = o.budget;
    truth = true_marginals(p, b);
  }

  if (o.format == "json") {
    std::string out = "{\"n_meas\":" + std::to_string(p.n_meas) +
                      ",\"n_land\":" + std::to_string(p.n_land) + ",\"k\":" + std::to_string(k) +
                      ",\"k_used\":" + std::to_string(table.k_used) +
                      ",\"exhausted\":" + (ranked.exhausted ? "true" : "false") +
                      ",\"gamma\":" + format_double(table.gamma) +
                      ",\"total_log_mass\":" + format_double(table.total_log_mass) +
                      ",\"wall_time_ns\":" + std::to_string(ns) + ",\"w_bar\":[";
    for (int r = 0; r < p.n_meas; ++r) {
      if (r) out += ',';
      out += '[';
      for (int j = 0; j <= p.n_land; ++j) {
        if (j) out += ',';
        out += format_double(table.w(r, j));
      }
      out += ']';
    }
    out += ']';
    if (truth) {
      out += ",\"delta\":" + format_double(table.max_abs_diff(*truth));
    }
    out += "}\n";
    emit(o.out, out);
    return kExitOk;
  }

  std::printf("problem %s: %d measurements x %d landmarks\n", problem_id_of(p, index).c_str(),
              p.n_meas, p.n_land);
  std::printf("approximate marginals (K = %ld, used %ld%s):\n", k, table.k_used,
              ranked.exhausted ? ", exhausted" : "");
  print_table(stdout, p, table);
  std::printf("gamma = %.3g   total_log_mass = %.6f   time = %.3f ms\n", table.gamma,
              table.total_log_mass, ns / 1e6);
  if (truth) {
    std::printf("\nbrute-force truth (%ld assignments):\n", truth->k_used);
    print_table(stdout, p, *truth);
    std::printf("delta = max |w - w_bar| = %.3g (bound gamma = %.3g)\n",
                table.max_abs_diff(*truth), table.gamma);
  }
  return kExitOk;
}

int cmd_oracle(const SharedOpts& o, const std::string& path, int index) {
  AssignmentProblem p = load_problem(path, index);
  EnumerationBudget b;
  b.max_assignments = o.budget;

  std::printf("problem %s: %d measurements x %d landmarks\n", problem_id_of(p, index).c_str(),
              p.n_meas, p.n_land);
  double log_bound = count_bound_log(feasibility(p));
  std::printf("count bound (min of independent-choice and Bregman-Minc): %.6g\n",
              std::exp(log_bound));
  if (p.n_land <= 20) {
    try {
      std::printf("exact count: %llu\n",
                  static_cast<unsigned long long>(count_exact(p)));
    } catch (const BudgetExceeded& e) {
      std::printf("exact count: refused (%s)\n", e.what());
    }
  }

  MarginalTable tm = true_marginals(p, b);
  std::printf("\nbrute-force marginals (%ld assignments):\n", tm.k_used);
  print_table(stdout, p, tm);

  try {
    MarginalTable pm = permanent_marginals(p);
    std::printf("\npermanent-ratio marginals:\n");
    print_table(stdout, p, pm);
    std::printf("\nmax |brute - permanent| = %.3g\n", tm.max_abs_diff(pm));
  } catch (const BudgetExceeded& e) {
    std::printf("\npermanent-ratio marginals: refused (%s)\n", e.what());
  }
  return kExitOk;
}

int cmd_bench_timing(const SharedOpts& o, const std::string& path) {
  auto corpus = corpus_read_file(path);
  BenchOptions opts;
  opts.k_list = o.k_list;
  opts.ryser_cap = o.ryser_cap;
  opts.warmup = o.warmup;
  auto records = run_bench_timing(corpus, opts);
  emit(o.out, o.format == "json" ? timing_json(records) : timing_csv(records));
  if (!o.svg.empty()) write_file(o.svg, svg_timing_scatter(records));
  std::fprintf(stderr, "bench-timing: %zu records over %zu problems\n", records.size(),
               corpus.size());
  return kExitOk;
}

int cmd_bench_error(const SharedOpts& o, const std::string& path) {
  auto corpus = corpus_read_file(path);
  BenchOptions opts;
  opts.k_list = o.k_list;
  opts.budget = o.budget;
  opts.top_terms = o.top_terms;
  opts.workers = o.workers;
  auto result = run_bench_error(corpus, opts);
  emit(o.out, o.format == "json" ? error_json(result.records) : error_csv(result.records));
  if (!o.svg.empty()) write_file(o.svg, svg_error_order_stats(result.records));
  std::fprintf(stderr, "bench-error: %zu records over %zu problems\n", result.records.size(),
               corpus.size());
  if (!result.skipped.empty()) {
    std::fprintf(stderr, "bench-error: skipped %zu problems over budget:\n",
                 result.skipped.size());
    for (const auto& s : result.skipped) {
      std::fprintf(stderr, "  %s (count > %.6g)\n", s.problem_id.c_str(), s.count_estimate - 1);
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-best marginal data association for semantic SLAM landmarks"};
  app.require_subcommand(1);
  SharedOpts o;

  std::string config_path;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic problem corpus (JSONL)");
  gen->add_option("--config", config_path, "Scenario config JSON (default: built-in demo)");
  add_shared(gen, o);

  std::string solve_path;
  int solve_index = 0;
  bool with_oracle = false;
  auto* solve = app.add_subcommand("solve", "Compute marginal association probabilities");
  solve->add_option("problem", solve_path, "Problem file (JSON or JSONL)")->required();
  solve->add_option("--index", solve_index, "Problem index within a JSONL corpus");
  solve->add_flag("--oracle", with_oracle, "Also print the brute-force truth and delta");
  add_shared(solve, o);

  std::string oracle_path;
  int oracle_index = 0;
  auto* oracle = app.add_subcommand("oracle", "Cross-check the exact oracles on a problem");
  oracle->add_option("problem", oracle_path, "Problem file (JSON or JSONL)")->required();
  oracle->add_option("--index", oracle_index, "Problem index within a JSONL corpus");
  add_shared(oracle, o);

  std::string timing_path;
  auto* timing = app.add_subcommand("bench-timing", "Per-problem timing study (CSV/SVG)");
  timing->add_option("corpus", timing_path, "JSONL corpus")->required();
  add_shared(timing, o);

  std::string error_path;
  auto* error = app.add_subcommand("bench-error", "Worst-case error order statistics (CSV/SVG)");
  error->add_option("corpus", error_path, "JSONL corpus")->required();
  add_shared(error, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, config_path);
    if (solve->parsed()) return cmd_solve(o, solve_path, solve_index, with_oracle);
    if (oracle->parsed()) return cmd_oracle(o, oracle_path, oracle_index);
    if (timing->parsed()) return cmd_bench_timing(o, timing_path);
    if (error->parsed()) return cmd_bench_error(o, error_path);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const BudgetExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
