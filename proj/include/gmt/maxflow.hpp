#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace gmt {

/// Integer max-flow / min-cut (Boykov-Kolmogorov from Boost.Graph).
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);
  ~MaxFlow();
  MaxFlow(const MaxFlow&) = delete;
  MaxFlow& operator=(const MaxFlow&) = delete;

  /// Arc u -> v with capacity `cap` and reverse arc v -> u with `rev_cap`.
  void add_edge(int u, int v, std::int64_t cap, std::int64_t rev_cap = 0);
  std::int64_t solve(int s, int t);
  /// Nodes reachable from s in the residual graph after solve(): the
  /// inclusion-minimal source side among all minimum cuts, independent of
  /// which maximum flow the solver found.
  std::vector<char> source_side(int s) const;
  int nodes() const { return nodes_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int nodes_ = 0;
};

}  // namespace gmt
