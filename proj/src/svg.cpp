#include "semassoc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace semassoc {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 520;
constexpr int kMarginL = 70;
constexpr int kMarginR = 150;
constexpr int kMarginT = 40;
constexpr int kMarginB = 55;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  double to_px(double v, double px_lo, double px_hi) const {
    double u = (v - lo) / (hi - lo);
    return px_lo + u * (px_hi - px_lo);
  }
};

double x_px(const Axis& ax, double v) { return ax.to_px(v, kMarginL, kWidth - kMarginR); }
double y_px(const Axis& ax, double v) { return ax.to_px(v, kHeight - kMarginB, kMarginT); }

// Blue-to-red ramp for max_dim coloring.
std::string dim_color(int dim, int dim_lo, int dim_hi) {
  double u = dim_hi > dim_lo ? double(dim - dim_lo) / (dim_hi - dim_lo) : 0.0;
  int r = static_cast<int>(40 + 215 * u);
  int g = static_cast<int>(70 + 60 * (1 - std::abs(2 * u - 1)));
  int b = static_cast<int>(255 - 215 * u);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) +
         " " + std::to_string(kHeight) + "\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#222\">\n";
}

std::string axes(const Axis& xa, const Axis& ya, const std::string& x_label,
                 const std::string& y_label, int x_ticks, int y_ticks, bool x_as_int) {
  std::string out;
  double px0 = kMarginL, px1 = kWidth - kMarginR;
  double py0 = kHeight - kMarginB, py1 = kMarginT;
  out += "<line x1=\"" + num(px0) + "\" y1=\"" + num(py0) + "\" x2=\"" + num(px1) + "\" y2=\"" +
         num(py0) + "\" stroke=\"#444\"/>\n";
  out += "<line x1=\"" + num(px0) + "\" y1=\"" + num(py0) + "\" x2=\"" + num(px0) + "\" y2=\"" +
         num(py1) + "\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= x_ticks; ++i) {
    double v = xa.lo + (xa.hi - xa.lo) * i / x_ticks;
    double px = x_px(xa, v);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(py0) + "\" x2=\"" + num(px) + "\" y2=\"" +
           num(py0 + 5) + "\" stroke=\"#444\"/>\n";
    char buf[32];
    if (x_as_int) {
      std::snprintf(buf, sizeof(buf), "%.0f", v);
    } else {
      std::snprintf(buf, sizeof(buf), "%.1f", v);
    }
    out += "<text x=\"" + num(px) + "\" y=\"" + num(py0 + 20) +
           "\" text-anchor=\"middle\">" + buf + "</text>\n";
  }
  for (int i = 0; i <= y_ticks; ++i) {
    double v = ya.lo + (ya.hi - ya.lo) * i / y_ticks;
    double py = y_px(ya, v);
    out += "<line x1=\"" + num(px0 - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(px0) +
           "\" y2=\"" + num(py) + "\" stroke=\"#444\"/>\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    out += "<text x=\"" + num(px0 - 10) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\">" + buf + "</text>\n";
  }
  out += "<text x=\"" + num((px0 + px1) / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\">" + x_label + "</text>\n";
  out += "<text x=\"18\" y=\"" + num((py0 + py1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num((py0 + py1) / 2) + ")\">" + y_label + "</text>\n";
  return out;
}

double log10_ms(int64_t ns) { return std::log10(std::max<double>(ns, 1.0) / 1e6); }

}  // namespace

std::string svg_timing_scatter(const std::vector<TimingRecord>& records) {
  std::map<std::string, std::vector<const TimingRecord*>> by_method;
  std::map<std::string, size_t> index_of;  // per-problem x position
  int dim_lo = 1 << 30, dim_hi = 0;
  for (const auto& r : records) {
    by_method[r.method].push_back(&r);
    index_of.emplace(r.problem_id, index_of.size());
    dim_lo = std::min(dim_lo, r.max_dim);
    dim_hi = std::max(dim_hi, r.max_dim);
  }
  Axis xa{0.0, std::max<double>(1.0, static_cast<double>(index_of.size()))};
  Axis ya{0.0, 1.0};
  double y_min = 1e30, y_max = -1e30;
  for (const auto& r : records) {
    double v = log10_ms(r.wall_time_ns);
    y_min = std::min(y_min, v);
    y_max = std::max(y_max, v);
  }
  if (records.empty()) {
    y_min = -4;
    y_max = 3;
  }
  ya.lo = std::floor(y_min) - 0.2;
  ya.hi = std::ceil(y_max) + 0.2;

  std::string out = header();
  out += "<text x=\"" + num(kWidth / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
         "Marginal computation time per problem</text>\n";
  out += axes(xa, ya, "problem index", "log10(milliseconds)", 8, 7, true);

  std::map<std::string, std::string> marker;  // method -> shape tag
  size_t mi = 0;
  for (auto& [method, recs] : by_method) {
    bool circle = mi++ % 2 == 0;
    marker[method] = circle ? "circle" : "square";
    for (const TimingRecord* r : recs) {
      double px = x_px(xa, static_cast<double>(index_of[r->problem_id]));
      double py = y_px(ya, log10_ms(r->wall_time_ns));
      std::string color = dim_color(r->max_dim, dim_lo, dim_hi);
      if (circle) {
        out += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) +
               "\" r=\"3\" fill=\"" + color + "\" fill-opacity=\"0.75\"/>\n";
      } else {
        out += "<rect x=\"" + num(px - 2.6) + "\" y=\"" + num(py - 2.6) +
               "\" width=\"5.2\" height=\"5.2\" fill=\"" + color + "\" fill-opacity=\"0.75\"/>\n";
      }
    }
  }

  double lx = kWidth - kMarginR + 16, ly = kMarginT + 10;
  out += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" font-size=\"14\">method</text>\n";
  for (auto& [method, shape] : marker) {
    ly += 20;
    if (shape == "circle") {
      out += "<circle cx=\"" + num(lx + 5) + "\" cy=\"" + num(ly - 4) + "\" r=\"4\" fill=\"#333\"/>\n";
    } else {
      out += "<rect x=\"" + num(lx + 1) + "\" y=\"" + num(ly - 8) +
             "\" width=\"8\" height=\"8\" fill=\"#333\"/>\n";
    }
    out += "<text x=\"" + num(lx + 16) + "\" y=\"" + num(ly) + "\">" + method + "</text>\n";
  }
  ly += 30;
  out += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" font-size=\"14\">max dim</text>\n";
  for (int i = 0; i <= 4; ++i) {
    int dim = dim_lo + (dim_hi - dim_lo) * i / 4;
    ly += 18;
    out += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 10) + "\" width=\"12\" height=\"12\" fill=\"" +
           dim_color(dim, dim_lo, dim_hi) + "\"/>\n";
    out += "<text x=\"" + num(lx + 18) + "\" y=\"" + num(ly) + "\">" + std::to_string(dim) +
           "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string svg_error_order_stats(const std::vector<ErrorRecord>& records) {
  constexpr double kFloor = 1e-18;  // plotting floor for delta == 0
  std::map<long, std::vector<double>> by_k;
  for (const auto& r : records) by_k[r.k].push_back(std::max(r.delta, kFloor));
  for (auto& [k, deltas] : by_k) std::sort(deltas.begin(), deltas.end());

  Axis xa{0.0, 1.0};
  Axis ya{std::log10(kFloor), 0.0};

  std::string out = header();
  out += "<text x=\"" + num(kWidth / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
         "Order statistics of the worst-case probability error</text>\n";
  out += axes(xa, ya, "normalized problem rank", "log10(delta)", 10, 6, false);

  const char* palette[] = {"#1f66ad", "#d1495b", "#3a7d44", "#8c54a1", "#c87f0a", "#2a9d8f"};
  size_t ci = 0;
  double lx = kWidth - kMarginR + 16, ly = kMarginT + 10;
  for (auto& [k, deltas] : by_k) {
    std::string color = palette[ci++ % 6];
    std::string points;
    for (size_t i = 0; i < deltas.size(); ++i) {
      double u = deltas.size() > 1 ? static_cast<double>(i) / (deltas.size() - 1) : 0.0;
      points += num(x_px(xa, u)) + "," + num(y_px(ya, std::log10(deltas[i]))) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"" +
           points + "\"/>\n";
    ly += 20;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 14) +
           "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 20) + "\" y=\"" + num(ly) + "\">k = " + std::to_string(k) +
           "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace semassoc
