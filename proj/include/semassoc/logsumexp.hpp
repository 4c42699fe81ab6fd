#pragma once

#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>

namespace semassoc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(sum_i exp(values[i])) by max-shifting. Entries may be -inf (zero
/// probability); the result is -inf iff all entries are. Safe for any finite
/// spread of inputs. Throws std::invalid_argument on an empty list.
inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("log_sum_exp: empty input");
  }
  double m = kNegInf;
  for (double v : values) {
    if (v > m) m = v;
  }
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double v : values) {
    if (v != kNegInf) acc += std::exp(v - m);
  }
  return m + std::log(acc);
}

inline double log_sum_exp(std::initializer_list<double> values) {
  return log_sum_exp(std::span<const double>(values.begin(), values.size()));
}

/// Two-term log-sum-exp, usable as a fold.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = a > b ? a : b;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace semassoc
