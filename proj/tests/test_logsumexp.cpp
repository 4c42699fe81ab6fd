#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "semassoc/logsumexp.hpp"
#include "semassoc/rng.hpp"

using namespace semassoc;

TEST_CASE("two equal terms give log 2") {
  CHECK(log_sum_exp({0.0, 0.0}) == doctest::Approx(0.69314718055994529).epsilon(1e-14));
}

TEST_CASE("-inf is the additive identity") {
  CHECK(log_sum_exp({kNegInf, -3.25}) == -3.25);
  CHECK(log_sum_exp({-3.25, kNegInf}) == -3.25);
  CHECK(log_sum_exp({kNegInf, kNegInf}) == kNegInf);
}

TEST_CASE("large negative inputs do not underflow") {
  // Frozen from a 60-digit extended-precision evaluation of
  // -999.7 + log(exp(-0.3) + exp(-0.8) + 1).
  double got = log_sum_exp({-1000.0, -1000.5, -999.7});
  CHECK(got == doctest::Approx(-998.91603125075915).epsilon(1e-15));
}

TEST_CASE("large positive inputs do not overflow") {
  double got = log_sum_exp({700.0, 699.0});
  CHECK(std::isfinite(got));
  CHECK(got == doctest::Approx(700.0 + std::log1p(std::exp(-1.0))).epsilon(1e-14));
}

TEST_CASE("empty input is a usage error") {
  CHECK_THROWS_AS(log_sum_exp(std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("agrees with direct summation when safe") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> vals;
    int n = 1 + static_cast<int>(rng.uniform_index(8));
    double direct = 0.0;
    for (int i = 0; i < n; ++i) {
      vals.push_back(rng.uniform(-8.0, 0.0));
      direct += std::exp(vals.back());
    }
    CHECK(log_sum_exp(vals) == doctest::Approx(std::log(direct)).epsilon(1e-12));
  }
}

TEST_CASE("log_add folds to the same result") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> vals;
    double acc = kNegInf;
    for (int i = 0; i < 5; ++i) {
      vals.push_back(rng.uniform(-20.0, 0.0));
      acc = log_add(acc, vals.back());
    }
    CHECK(acc == doctest::Approx(log_sum_exp(vals)).epsilon(1e-12));
  }
}
