#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "semassoc/problem.hpp"

namespace semassoc {

/// Malformed problem file or scenario config; the message names the
/// offending field.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses one problem document (UTF-8 JSON, version 1). -inf entries are
/// encoded as the string "-inf".
AssignmentProblem problem_read(const std::string& bytes);

/// Deterministic single-line serialization: stable field order, floats with
/// 17 significant digits, so write(read(x)) == write(read(write(read(x)))).
std::string problem_write(const AssignmentProblem& p);

/// JSONL corpus: one problem per line, blank lines ignored.
std::vector<AssignmentProblem> corpus_read(const std::string& bytes);
std::string corpus_write(const std::vector<AssignmentProblem>& problems);

std::vector<AssignmentProblem> corpus_read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

/// %.17g rendering used by every deterministic text output in the project.
std::string format_double(double v);

}  // namespace semassoc
