#pragma once

#include <memory>
#include <optional>

#include "semassoc/lsap.hpp"
#include "semassoc/problem.hpp"

namespace semassoc {

/// Lazy enumeration of assignments in non-increasing log_prob order via
/// Murty's partitioning over the warm-started LSAP solver. Children of the
/// incumbent optimum with pairs e_1..e_n (in measurement order) ban e_i and
/// lock e_1..e_{i-1}; the live frontier therefore partitions the unexplored
/// assignment space and no assignment is ever produced twice.
///
/// Exact log_prob ties are drained as a whole class and yielded in
/// lexicographic pair-map order, which makes the output order (and the
/// top-K cut under ties) deterministic.
///
/// Not shareable across threads mid-iteration; concurrent streams over
/// distinct problems are fine.
class KBestStream {
 public:
  explicit KBestStream(const AssignmentProblem& p);
  ~KBestStream();
  KBestStream(KBestStream&&) noexcept;
  KBestStream& operator=(KBestStream&&) noexcept;

  /// Next assignment in ranked order, or nullopt when the problem is
  /// exhausted.
  std::optional<Assignment> next();

  /// True once next() has returned nullopt.
  bool exhausted() const;

  /// LSAP solves performed so far (root solve plus one warm-started
  /// augmentation per partition child).
  long lsap_solves() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// The K likeliest assignments of p, sorted by (log_prob descending,
/// pair-map lexicographic). Sets exhausted when the problem has fewer than
/// K assignments in total.
RankedAssignmentSet kbest(const AssignmentProblem& p, long k);

}  // namespace semassoc
