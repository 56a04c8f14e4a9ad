#pragma once

#include "ahgr/graph.hpp"

#include <string>
#include <vector>

namespace ahgr {

enum class SourceKind { Proximity, Community, Attributes, External };

/// One auxiliary reweighted graph: a symmetric N x N weight matrix with
/// entries normalized to [0,1], tagged with the information source it encodes.
struct SourceView {
  SourceKind kind = SourceKind::External;
  int step = 0;        // proximity order h; 0 otherwise
  std::string name;    // set for External sources
  Matrix matrix;

  std::string label() const;
};

/// Walk-count matrices [A^1, ..., A^h_max]; entry (i,j) of A^h is the number
/// of length-h walks between i and j.
std::vector<Matrix> proximity_views(const Matrix& adjacency, int h_max);

/// Modularity matrix B_ij = A_ij - d_i d_j / (2e). Every row sums to zero.
Matrix modularity_view(const Matrix& adjacency);

/// Cosine similarity between attribute rows; pairs involving an all-zero row
/// get similarity 0.
Matrix attribute_view(const Matrix& attributes);

/// Z-score then max-min normalization over all entries (flattened). A constant
/// input maps to all zeros.
Matrix normalize_view(const Matrix& raw);

/// Builds the ordered, normalized source list
/// [Proximity(1)..Proximity(h_max), Community?, Attributes?].
std::vector<SourceView> build_views(const AttributedGraph& graph, int h_max,
                                    bool include_community,
                                    bool include_attributes);

} // namespace ahgr
