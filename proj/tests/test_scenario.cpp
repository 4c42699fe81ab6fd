#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "semassoc/marginals.hpp"
#include "semassoc/murty.hpp"
#include "semassoc/problem_io.hpp"
#include "semassoc/scenario.hpp"

using namespace semassoc;

namespace {

// Three landmarks well separated laterally, straight-ahead trajectory.
std::string separated_config(double det_prob, double clutter, double sigma) {
  char buf[1024];
  std::snprintf(buf, sizeof(buf), R"({
    "name": "sep",
    "seed": 99,
    "camera": {"focal": 500.0, "cx": 320.0, "cy": 240.0, "baseline": 0.5},
    "noise": {"center_px_sigma": %g, "size_rel_sigma": %g, "detection_prob": %g,
              "clutter_rate": %g},
    "landmarks": [
      {"center": [-6, 0, 20], "radii": [1, 1, 1], "category": "car"},
      {"center": [0, 1, 24],  "radii": [1.2, 0.8, 1], "category": "car"},
      {"center": [6, -1, 22], "radii": [0.7, 1.1, 0.9], "category": "car"}
    ],
    "trajectory": {"frames": 8, "waypoints": [[0, 0, 0], [0, 0, 8]]}
  })", sigma, sigma > 0 ? 0.05 : 0.0, det_prob, clutter);
  return buf;
}

}  // namespace

TEST_CASE("config parsing rejects bad fields by name") {
  CHECK_THROWS_WITH_AS(scenario_from_json("{"), doctest::Contains("invalid JSON"), ParseError);
  CHECK_THROWS_WITH_AS(scenario_from_json(R"({"trajectory": {"frames": 3}})"),
                       doctest::Contains("trajectory"), ParseError);
  CHECK_THROWS_WITH_AS(
      scenario_from_json(
          R"({"camera": {"baseline": -1},
              "trajectory": {"frames": 1, "waypoints": [[0,0,0],[0,0,1]]}})"),
      doctest::Contains("baseline"), ParseError);
  CHECK_THROWS_WITH_AS(
      scenario_from_json(
          R"({"landmarks": [{"center": [0,0], "radii": [1,1,1]}],
              "trajectory": {"frames": 1, "waypoints": [[0,0,0],[0,0,1]]}})"),
      doctest::Contains("landmarks[0].center"), ParseError);
}

TEST_CASE("same seed twice gives byte-identical problems") {
  Scenario s = scenario_from_json(separated_config(0.85, 0.7, 1.0));
  auto corpus1 = generate_corpus(s, -8.0, 50.0);
  auto corpus2 = generate_corpus(s, -8.0, 50.0);
  CHECK(corpus_write(corpus1) == corpus_write(corpus2));
  CHECK(!corpus1.empty());
}

TEST_CASE("different seeds differ") {
  Scenario s = scenario_from_json(separated_config(0.85, 0.7, 1.0));
  auto corpus1 = generate_corpus(s, -8.0, 50.0);
  s.seed += 1;
  auto corpus2 = generate_corpus(s, -8.0, 50.0);
  CHECK(corpus_write(corpus1) != corpus_write(corpus2));
}

TEST_CASE("generated problems are valid and carry a valid truth") {
  Scenario s = scenario_from_json(separated_config(0.7, 1.5, 2.0));
  auto corpus = generate_corpus(s, -8.0, 50.0);
  REQUIRE(!corpus.empty());
  for (const auto& p : corpus) {
    p.validate();
    REQUIRE(p.truth.has_value());
    Assignment truth{*p.truth, assignment_log_prob(p, *p.truth)};
    validate_assignment(p, truth);
    CHECK(p.meta.count("id") == 1);
    // round-trips through the problem file format
    CHECK(problem_write(problem_read(problem_write(p))) == problem_write(p));
  }
}

TEST_CASE("zero noise, full detection, separated landmarks: truth dominates") {
  Scenario s = scenario_from_json(separated_config(1.0, 0.0, 0.0));
  auto corpus = generate_corpus(s, -8.0, 50.0);
  REQUIRE(!corpus.empty());
  for (const auto& p : corpus) {
    REQUIRE(p.truth.has_value());
    // the truth must be the unique LSAP optimum
    auto best = kbest(p, 1);
    REQUIRE(best.size() == 1);
    CHECK(best.entries[0].target == *p.truth);
    // and its marginal weights are decisive
    auto t = marginals(p, kbest(p, 200));
    for (int k = 0; k < p.n_meas; ++k) {
      int j = (*p.truth)[k];
      if (j == kNullTarget) continue;
      CHECK(t.w(k, j) > 0.99);
    }
  }
}

TEST_CASE("clutter-only frames have all-null truth") {
  std::string config = R"({
    "name": "clutter",
    "seed": 5,
    "noise": {"detection_prob": 1.0, "clutter_rate": 3.0},
    "landmarks": [{"center": [0, 0, -30], "radii": [1, 1, 1], "category": "car"}],
    "trajectory": {"frames": 6, "waypoints": [[0, 0, 0], [0, 0, 5]]}
  })";  // the only landmark sits behind the camera
  Scenario s = scenario_from_json(config);
  auto corpus = generate_corpus(s, -8.0, 50.0);
  for (const auto& p : corpus) {
    REQUIRE(p.truth.has_value());
    for (int t : *p.truth) CHECK(t == kNullTarget);
    CHECK(p.n_land == 0);  // behind-camera landmark is not in the prior map
  }
}

TEST_CASE("empty frames are skipped by corpus generation") {
  std::string config = R"({
    "name": "empty",
    "seed": 6,
    "noise": {"detection_prob": 0.05, "clutter_rate": 0.0},
    "landmarks": [{"center": [0, 0, 20], "radii": [1, 1, 1], "category": "car"}],
    "trajectory": {"frames": 40, "waypoints": [[0, 0, 0], [0, 0, 4]]}
  })";
  Scenario s = scenario_from_json(config);
  auto corpus = generate_corpus(s, -8.0, 50.0);
  CHECK(corpus.size() < 40);
  for (const auto& p : corpus) CHECK(p.n_meas >= 1);
}

TEST_CASE("cross-category pairs are gated") {
  std::string config = R"({
    "name": "cat",
    "seed": 8,
    "noise": {"detection_prob": 1.0, "clutter_rate": 0.0, "center_px_sigma": 0.0,
              "size_rel_sigma": 0.0},
    "landmarks": [
      {"center": [-1, 0, 20], "radii": [1, 1, 1], "category": "car"},
      {"center": [1, 0, 20],  "radii": [1, 1, 1], "category": "sign"}
    ],
    "trajectory": {"frames": 1, "waypoints": [[0, 0, 0], [0, 0, 1]]}
  })";
  Scenario s = scenario_from_json(config);
  auto corpus = generate_corpus(s, -8.0, 1e9);  // gate wide open: only category gates remain
  REQUIRE(corpus.size() == 1);
  const auto& p = corpus[0];
  REQUIRE(p.n_meas == 2);
  REQUIRE(p.n_land == 2);
  for (int k = 0; k < 2; ++k) {
    int truth = (*p.truth)[k];
    REQUIRE(truth != kNullTarget);
    CHECK(p.ll(k, truth) != kNegInf);
    CHECK(p.ll(k, 1 - truth) == kNegInf);  // the other landmark is cross-category
  }
}

TEST_CASE("demo config spans small to large problems") {
  Scenario s = scenario_from_json(default_demo_config());
  auto corpus = generate_corpus(s, -8.0, 50.0);
  REQUIRE(corpus.size() > 50);
  int lo = 1 << 30, hi = 0;
  for (const auto& p : corpus) {
    lo = std::min(lo, p.max_dim());
    hi = std::max(hi, p.max_dim());
  }
  CHECK(lo <= 3);
  CHECK(hi >= 25);
}
