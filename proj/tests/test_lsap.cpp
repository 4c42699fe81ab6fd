#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "semassoc/lsap.hpp"
#include "test_util.hpp"

using namespace semassoc;

namespace {

CostMatrix make_cost(int rows, int cols, std::vector<double> vals) {
  CostMatrix c;
  c.rows = rows;
  c.cols = cols;
  c.n_land = cols - rows;
  c.cost = std::move(vals);
  return c;
}

// Exhaustive minimum over all row-complete column-injective matchings that
// honor locks and bans. Returns nullopt when no finite matching exists.
std::optional<double> brute_min_cost(const CostMatrix& c, const PairList& locks,
                                     const PairList& bans) {
  std::vector<int> cols(c.cols);
  std::iota(cols.begin(), cols.end(), 0);
  double best = kInfeasibleCost;
  // choose an injective column per row by recursion
  std::vector<int> chosen(c.rows, -1);
  std::vector<uint8_t> used(c.cols, 0);
  auto banned = [&](int r, int cc) {
    return std::any_of(bans.begin(), bans.end(),
                       [&](auto pr) { return pr.first == r && pr.second == cc; });
  };
  auto locked_col = [&](int r) {
    for (auto& [lr, lc] : locks) {
      if (lr == r) return lc;
    }
    return -1;
  };
  std::function<void(int, double)> rec = [&](int r, double acc) {
    if (r == c.rows) {
      if (acc < best) best = acc;
      return;
    }
    int forced = locked_col(r);
    for (int cc = 0; cc < c.cols; ++cc) {
      if (used[cc] || (forced >= 0 && cc != forced)) continue;
      if (forced < 0 && banned(r, cc)) continue;
      double e = c.at(r, cc);
      if (e >= kInfeasibleBarrier) continue;
      used[cc] = 1;
      rec(r + 1, acc + e);
      used[cc] = 0;
    }
  };
  rec(0, 0.0);
  if (best >= kInfeasibleBarrier) return std::nullopt;
  return best;
}

}  // namespace

TEST_CASE("3x3 example: optimal cost 5") {
  auto c = make_cost(3, 3, {4, 1, 3, 2, 0, 5, 3, 2, 2});
  auto sol = solve_lsap(c);
  REQUIRE(sol.has_value());
  CHECK(sol->total_cost == doctest::Approx(5.0));
  // exhaustive check over the 6 permutations
  CHECK(*brute_min_cost(c, {}, {}) == doctest::Approx(5.0));
}

TEST_CASE("2x2 example: diagonal, then anti-diagonal under a ban") {
  auto c = make_cost(2, 2, {1, 2, 2, 1});
  auto sol = solve_lsap(c);
  REQUIRE(sol.has_value());
  CHECK(sol->total_cost == doctest::Approx(2.0));
  CHECK(sol->row_to_col == std::vector<int>{0, 1});

  auto banned = solve_lsap(c, {}, {{0, 0}});
  REQUIRE(banned.has_value());
  CHECK(banned->total_cost == doctest::Approx(4.0));
  CHECK(banned->row_to_col == std::vector<int>{1, 0});
}

TEST_CASE("augment lays out null columns per measurement") {
  AssignmentProblem p;
  p.n_meas = 2;
  p.n_land = 1;
  p.log_lik = {-1.0, -2.0};
  p.null_log_lik = {-3.0, -4.0};
  CostMatrix c = augment(p);
  CHECK(c.rows == 2);
  CHECK(c.cols == 3);
  CHECK(c.at(0, 0) == 1.0);
  CHECK(c.at(1, 0) == 2.0);
  CHECK(c.at(0, 1) == 3.0);
  CHECK(c.at(0, 2) == kInfeasibleCost);
  CHECK(c.at(1, 1) == kInfeasibleCost);
  CHECK(c.at(1, 2) == 4.0);
}

TEST_CASE("augment with no landmarks is the null diagonal") {
  AssignmentProblem p;
  p.n_meas = 3;
  p.n_land = 0;
  p.null_log_lik = {-1.0, -2.0, -3.0};
  CostMatrix c = augment(p);
  auto sol = solve_lsap(c);
  REQUIRE(sol.has_value());
  CHECK(sol->row_to_col == std::vector<int>{0, 1, 2});
  Assignment a = to_assignment(p, *sol);
  CHECK(a.target == std::vector<int>{kNullTarget, kNullTarget, kNullTarget});
  CHECK(a.log_prob == doctest::Approx(-6.0));
}

TEST_CASE("augmented optimum equals brute-force best assignment") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = testutil::random_problem(rng, 3, 3, 0.25);
    auto sol = solve_lsap(augment(p));
    REQUIRE(sol.has_value());
    auto all = testutil::ref_enumerate(p);
    testutil::ref_rank(all);
    CHECK(-sol->total_cost == doctest::Approx(all.front().second).epsilon(1e-12));
    CHECK(to_assignment(p, *sol).log_prob == doctest::Approx(all.front().second).epsilon(1e-12));
  }
}

TEST_CASE("optimality on random rectangular instances") {
  Rng rng(102);
  for (int trial = 0; trial < 120; ++trial) {
    int rows = 1 + static_cast<int>(rng.uniform_index(7));
    int cols = rows + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(11 - rows)));
    std::vector<double> vals(static_cast<size_t>(rows) * cols);
    for (auto& v : vals) {
      v = rng.bernoulli(0.15) ? kInfeasibleCost : rng.uniform(-5.0, 5.0);
    }
    auto c = make_cost(rows, cols, std::move(vals));
    auto brute = brute_min_cost(c, {}, {});
    auto sol = solve_lsap(c);
    REQUIRE(sol.has_value() == brute.has_value());
    if (sol) CHECK(sol->total_cost == doctest::Approx(*brute).epsilon(1e-10));
  }
}

TEST_CASE("locks and bans are honored and monotone in cost") {
  Rng rng(103);
  for (int trial = 0; trial < 80; ++trial) {
    int rows = 2 + static_cast<int>(rng.uniform_index(4));
    int cols = rows + static_cast<int>(rng.uniform_index(4));
    std::vector<double> vals(static_cast<size_t>(rows) * cols);
    for (auto& v : vals) v = rng.uniform(0.0, 9.0);
    auto c = make_cost(rows, cols, std::move(vals));
    auto base = solve_lsap(c);
    REQUIRE(base.has_value());

    int br = static_cast<int>(rng.uniform_index(rows));
    int bc = static_cast<int>(rng.uniform_index(cols));
    PairList bans{{br, bc}};
    auto with_ban = solve_lsap(c, {}, bans);
    auto brute_ban = brute_min_cost(c, {}, bans);
    REQUIRE(with_ban.has_value() == brute_ban.has_value());
    if (with_ban) {
      CHECK(with_ban->total_cost == doctest::Approx(*brute_ban).epsilon(1e-10));
      CHECK(with_ban->total_cost >= base->total_cost - 1e-12);
      CHECK(with_ban->row_to_col[br] != bc);
    }

    int lr = static_cast<int>(rng.uniform_index(rows));
    int lc = static_cast<int>(rng.uniform_index(cols));
    PairList locks{{lr, lc}};
    auto with_lock = solve_lsap(c, locks, {});
    auto brute_lock = brute_min_cost(c, locks, {});
    REQUIRE(with_lock.has_value() == brute_lock.has_value());
    if (with_lock) {
      CHECK(with_lock->total_cost == doctest::Approx(*brute_lock).epsilon(1e-10));
      CHECK(with_lock->total_cost >= base->total_cost - 1e-12);
      CHECK(with_lock->row_to_col[lr] == lc);
    }
  }
}

TEST_CASE("infeasible is a value, contradictions are usage errors") {
  // row 1 has no finite entry once (1,1) is banned
  auto c = make_cost(2, 2, {1.0, 2.0, kInfeasibleCost, 1.0});
  CHECK(solve_lsap(c).has_value());
  CHECK_FALSE(solve_lsap(c, {}, {{1, 1}}).has_value());

  CHECK_THROWS_AS(solve_lsap(c, {{0, 0}}, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(solve_lsap(c, {{0, 0}, {0, 1}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(solve_lsap(c, {{0, 0}, {1, 0}}, {}), std::invalid_argument);

  auto wide = make_cost(2, 1, {1.0, 2.0});
  CHECK_THROWS_AS(solve_lsap(wide), std::invalid_argument);
}

TEST_CASE("locking an infeasible pair reports infeasible") {
  auto c = make_cost(2, 2, {1.0, 2.0, kInfeasibleCost, 1.0});
  CHECK_FALSE(solve_lsap(c, {{1, 0}}, {}).has_value());
}
