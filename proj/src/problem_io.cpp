#include "semassoc/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace semassoc {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string cell_name(const char* field, size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

std::string cell_name(const char* field, size_t i, size_t j) {
  return std::string(field) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

double parse_entry(const json& v, const std::string& where, bool allow_neg_inf) {
  if (v.is_string()) {
    if (allow_neg_inf && v.get<std::string>() == "-inf") return kNegInf;
    throw ParseError(where + ": unexpected string \"" + v.get<std::string>() + "\"");
  }
  if (!v.is_number()) {
    throw ParseError(where + ": expected a number" + (allow_neg_inf ? " or \"-inf\"" : ""));
  }
  double d = v.get<double>();
  if (std::isnan(d)) throw ParseError(where + ": NaN not allowed");
  if (std::isinf(d)) throw ParseError(where + ": non-finite value not allowed");
  return d;
}

}  // namespace

AssignmentProblem problem_read(const std::string& bytes) {
  json doc = json::parse(bytes, nullptr, false);
  if (doc.is_discarded()) throw ParseError("problem file: invalid JSON");
  if (!doc.is_object()) throw ParseError("problem file: expected a JSON object");

  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw ParseError("version: missing or not an integer");
  }
  if (doc["version"].get<int>() != 1) {
    throw ParseError("version: unsupported value " + doc["version"].dump());
  }

  AssignmentProblem p;
  for (const char* field : {"n_meas", "n_land"}) {
    if (!doc.contains(field) || !doc[field].is_number_integer()) {
      throw ParseError(std::string(field) + ": missing or not an integer");
    }
  }
  p.n_meas = doc["n_meas"].get<int>();
  p.n_land = doc["n_land"].get<int>();
  if (p.n_meas < 0) throw ParseError("n_meas: must be >= 0");
  if (p.n_land < 0) throw ParseError("n_land: must be >= 0");

  if (!doc.contains("log_lik") || !doc["log_lik"].is_array()) {
    throw ParseError("log_lik: missing or not an array");
  }
  const json& rows = doc["log_lik"];
  if (rows.size() != static_cast<size_t>(p.n_meas)) {
    throw ParseError("log_lik: expected " + std::to_string(p.n_meas) + " rows, got " +
                     std::to_string(rows.size()));
  }
  p.log_lik.reserve(static_cast<size_t>(p.n_meas) * p.n_land);
  for (size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k].is_array() || rows[k].size() != static_cast<size_t>(p.n_land)) {
      throw ParseError(cell_name("log_lik", k) + ": expected " + std::to_string(p.n_land) +
                       " columns");
    }
    for (size_t j = 0; j < rows[k].size(); ++j) {
      p.log_lik.push_back(parse_entry(rows[k][j], cell_name("log_lik", k, j), true));
    }
  }

  if (!doc.contains("null_log_lik") || !doc["null_log_lik"].is_array() ||
      doc["null_log_lik"].size() != static_cast<size_t>(p.n_meas)) {
    throw ParseError("null_log_lik: missing or wrong length");
  }
  for (size_t k = 0; k < doc["null_log_lik"].size(); ++k) {
    p.null_log_lik.push_back(parse_entry(doc["null_log_lik"][k], cell_name("null_log_lik", k), false));
  }

  if (doc.contains("truth")) {
    if (!doc["truth"].is_array() || doc["truth"].size() != static_cast<size_t>(p.n_meas)) {
      throw ParseError("truth: wrong length");
    }
    std::vector<int> truth;
    for (size_t k = 0; k < doc["truth"].size(); ++k) {
      const json& v = doc["truth"][k];
      if (!v.is_number_integer()) throw ParseError(cell_name("truth", k) + ": expected an integer");
      int t = v.get<int>();
      if (t < kNullTarget || t >= p.n_land) {
        throw ParseError(cell_name("truth", k) + ": target out of range");
      }
      truth.push_back(t);
    }
    p.truth = std::move(truth);
  }

  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) throw ParseError("meta: expected an object");
    for (auto& [key, val] : doc["meta"].items()) {
      if (!val.is_string()) throw ParseError("meta." + key + ": expected a string");
      p.meta[key] = val.get<std::string>();
    }
  }

  p.validate();
  return p;
}

std::string problem_write(const AssignmentProblem& p) {
  p.validate();
  std::string out;
  out.reserve(64 + 24 * p.log_lik.size());
  out += "{\"version\":1,\"n_meas\":" + std::to_string(p.n_meas);
  out += ",\"n_land\":" + std::to_string(p.n_land);
  out += ",\"log_lik\":[";
  for (int k = 0; k < p.n_meas; ++k) {
    if (k) out += ',';
    out += '[';
    for (int j = 0; j < p.n_land; ++j) {
      if (j) out += ',';
      double v = p.ll(k, j);
      out += v == kNegInf ? "\"-inf\"" : format_double(v);
    }
    out += ']';
  }
  out += "],\"null_log_lik\":[";
  for (int k = 0; k < p.n_meas; ++k) {
    if (k) out += ',';
    out += format_double(p.null_log_lik[k]);
  }
  out += ']';
  if (p.truth) {
    out += ",\"truth\":[";
    for (int k = 0; k < p.n_meas; ++k) {
      if (k) out += ',';
      out += std::to_string((*p.truth)[k]);
    }
    out += ']';
  }
  if (!p.meta.empty()) {
    out += ",\"meta\":{";
    bool first = true;
    for (const auto& [key, val] : p.meta) {
      if (!first) out += ',';
      first = false;
      out += json(key).dump();
      out += ':';
      out += json(val).dump();
    }
    out += '}';
  }
  out += '}';
  return out;
}

std::vector<AssignmentProblem> corpus_read(const std::string& bytes) {
  std::vector<AssignmentProblem> out;
  std::istringstream in(bytes);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(problem_read(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string corpus_write(const std::vector<AssignmentProblem>& problems) {
  std::string out;
  for (const auto& p : problems) {
    out += problem_write(p);
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << bytes;
}

std::vector<AssignmentProblem> corpus_read_file(const std::string& path) {
  return corpus_read(read_file(path));
}

}  // namespace semassoc
