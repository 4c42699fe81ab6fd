#pragma once

#include <string>
#include <vector>

#include "semassoc/bench.hpp"

namespace semassoc {

/// Scatter of log10(milliseconds) per problem, one marker per (problem,
/// method) record, colored by max_dim. Self-contained SVG: plain shapes and
/// generic font families, no external resources.
std::string svg_timing_scatter(const std::vector<TimingRecord>& records);

/// Order statistics of the worst-case error delta: per K one curve of
/// sorted delta (log10 y-axis) against normalized rank in [0, 1].
std::string svg_error_order_stats(const std::vector<ErrorRecord>& records);

}  // namespace semassoc
