#pragma once

#include "ahgr/common.hpp"

#include <optional>
#include <vector>

namespace ahgr {

/// Per-node class or cluster ids (non-negative integers).
using Labeling = std::vector<int>;

/// Undirected unweighted topology plus a binary node-attribute matrix and
/// optional ground-truth labels. Immutable after construction by convention;
/// safe to share across concurrent readers.
struct AttributedGraph {
  Matrix adjacency;             // N x N, entries in {0,1}, symmetric, zero diagonal
  Matrix attributes;            // N x M, entries in {0,1}; M == 0 when absent
  std::optional<Labeling> labels;

  Index n_nodes() const { return adjacency.rows(); }
  Index n_attrs() const { return attributes.cols(); }
};

inline int label_count(const Labeling& labels) {
  int mx = -1;
  for (int v : labels) mx = std::max(mx, v);
  return mx + 1;
}

} // namespace ahgr
