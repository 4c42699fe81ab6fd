#include "semassoc/murty.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace semassoc {

namespace {

struct Node {
  PairList locks;
  PairList bans;
  std::vector<int> row_to_col;  // full matching, including locked rows
  std::vector<double> v;        // column duals
  Assignment best;
};

// Max-heap on log_prob; exact ties surface in lexicographic pair-map order.
struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    if (a.best.log_prob != b.best.log_prob) return a.best.log_prob < b.best.log_prob;
    return b.best.lex_less(a.best);
  }
};

}  // namespace

struct KBestStream::Impl {
  const AssignmentProblem* problem;
  // The null-augmented matrix completed to a square with zero-cost dummy
  // rows. A complete square matching leaves exactly one column free after an
  // edge is banned, which is what makes the single warm-started augmentation
  // per child provably optimal; with spare columns a freed column's drifted
  // dual can hide a cheaper re-seating of an untouched row.
  CostMatrix base;
  CostMatrix work;
  int real_rows = 0;
  LsapSolver solver;
  std::vector<Node> heap;
  std::deque<Assignment> tie_buffer;
  bool done = false;
  bool empty_problem = false;
  bool empty_emitted = false;
  // scratch reused across child solves
  std::vector<uint8_t> row_active_, col_active_;
  std::vector<int> colsol_;

  explicit Impl(const AssignmentProblem& p) : problem(&p) {
    if (p.n_meas == 0) {
      empty_problem = true;
      return;
    }
    real_rows = p.n_meas;
    CostMatrix rect = augment(p);
    base.rows = base.cols = rect.cols;
    base.n_land = rect.n_land;
    base.cost.assign(static_cast<size_t>(base.rows) * base.cols, 0.0);
    std::copy(rect.cost.begin(), rect.cost.end(), base.cost.begin());
    work = base;
    Node root;
    root.row_to_col.assign(base.rows, -1);
    root.v.assign(base.cols, 0.0);
    std::vector<uint8_t> row_active(base.rows, 1), col_active(base.cols, 1);
    std::vector<int> colsol(base.cols, -1);
    std::vector<int> free_rows(base.rows);
    for (int r = 0; r < base.rows; ++r) free_rows[r] = r;
    if (!solver.augment_rows(base, row_active, col_active, free_rows, root.row_to_col, colsol,
                             root.v)) {
      done = true;  // cannot happen for null-augmented problems
      return;
    }
    root.best = make_assignment(root.row_to_col);
    push(std::move(root));
  }

  Assignment make_assignment(const std::vector<int>& row_to_col) const {
    Assignment a;
    a.target.resize(problem->n_meas);
    for (int k = 0; k < problem->n_meas; ++k) {
      int col = row_to_col[k];
      a.target[k] = col < problem->n_land ? col : kNullTarget;
    }
    a.log_prob = assignment_log_prob(*problem, a.target);
    return a;
  }

  void push(Node&& n) {
    heap.push_back(std::move(n));
    std::push_heap(heap.begin(), heap.end(), NodeAfter{});
  }

  Node pop() {
    std::pop_heap(heap.begin(), heap.end(), NodeAfter{});
    Node n = std::move(heap.back());
    heap.pop_back();
    return n;
  }

  // Solve one child subproblem (parent state plus one extra ban) by a single
  // warm-started augmentation. Returns the node if it is feasible.
  std::optional<Node> solve_child(const Node& parent, PairList&& locks, PairList&& bans,
                                  int banned_row) {
    for (const auto& [r, c] : bans) work.at(r, c) = kInfeasibleCost;

    row_active_.assign(base.rows, 1);
    col_active_.assign(base.cols, 1);
    for (const auto& [r, c] : locks) {
      row_active_[r] = 0;
      col_active_[c] = 0;
    }
    Node child;
    child.row_to_col = parent.row_to_col;
    child.v = parent.v;
    child.row_to_col[banned_row] = -1;
    colsol_.assign(base.cols, -1);
    for (int r = 0; r < base.rows; ++r) {
      if (child.row_to_col[r] >= 0) colsol_[child.row_to_col[r]] = r;
    }
    const int free_rows[1] = {banned_row};
    bool ok = solver.augment_rows(work, row_active_, col_active_, free_rows, child.row_to_col,
                                  colsol_, child.v);
    for (const auto& [r, c] : bans) work.at(r, c) = base.at(r, c);
    if (!ok) return std::nullopt;
    for (int r = 0; r < real_rows; ++r) {
      if (base.at(r, child.row_to_col[r]) >= kInfeasibleBarrier) return std::nullopt;
    }

    child.locks = std::move(locks);
    child.bans = std::move(bans);
    child.best = make_assignment(child.row_to_col);
    return child;
  }

  void partition(const Node& node) {
    std::vector<uint8_t> locked_row(real_rows, 0);
    for (const auto& [r, c] : node.locks) locked_row[r] = 1;

    PairList locks = node.locks;
    for (int r = 0; r < real_rows; ++r) {
      if (locked_row[r]) continue;
      std::pair<int, int> edge{r, node.row_to_col[r]};
      PairList bans = node.bans;
      bans.push_back(edge);
      if (auto child = solve_child(node, PairList(locks), std::move(bans), r)) {
        push(std::move(*child));
      }
      locks.push_back(edge);
    }
  }

  std::optional<Assignment> next() {
    if (empty_problem) {
      // The empty problem has exactly one (empty) assignment.
      if (empty_emitted) {
        done = true;
        return std::nullopt;
      }
      empty_emitted = true;
      return Assignment{{}, 0.0};
    }
    if (!tie_buffer.empty()) {
      Assignment a = std::move(tie_buffer.front());
      tie_buffer.pop_front();
      return a;
    }
    if (heap.empty()) {
      done = true;
      return std::nullopt;
    }
    Node top = pop();
    partition(top);
    Assignment head = std::move(top.best);
    // Drain the whole class of exact ties so it can be emitted in
    // lexicographic order regardless of discovery order.
    while (!heap.empty() && heap.front().best.log_prob == head.log_prob) {
      Node tied = pop();
      partition(tied);
      tie_buffer.push_back(std::move(tied.best));
    }
    if (!tie_buffer.empty()) {
      tie_buffer.push_back(head);
      std::sort(tie_buffer.begin(), tie_buffer.end(),
                [](const Assignment& a, const Assignment& b) { return a.lex_less(b); });
      Assignment a = std::move(tie_buffer.front());
      tie_buffer.pop_front();
      return a;
    }
    return head;
  }
};

KBestStream::KBestStream(const AssignmentProblem& p) : impl_(std::make_unique<Impl>(p)) {}
KBestStream::~KBestStream() = default;
KBestStream::KBestStream(KBestStream&&) noexcept = default;
KBestStream& KBestStream::operator=(KBestStream&&) noexcept = default;

std::optional<Assignment> KBestStream::next() { return impl_->next(); }
bool KBestStream::exhausted() const { return impl_->done; }
long KBestStream::lsap_solves() const { return impl_->solver.invocations(); }

RankedAssignmentSet kbest(const AssignmentProblem& p, long k) {
  if (k < 1) throw std::invalid_argument("kbest: K must be >= 1");
  RankedAssignmentSet out;
  KBestStream stream(p);
  for (long i = 0; i < k; ++i) {
    auto a = stream.next();
    if (!a) {
      out.exhausted = true;
      break;
    }
    out.entries.push_back(std::move(*a));
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const Assignment& a, const Assignment& b) {
                     if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
                     return a.lex_less(b);
                   });
  return out;
}

}  // namespace semassoc
