#pragma once

#include "ahgr/graph.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace ahgr {

// Text formats, whitespace-separated ASCII with '#' comment lines:
//   edge list   "u v"            attributes  "node attr"
//   labels      "node label"     embedding   header "N K", rows "i v1 ... vK"

struct EdgeListResult {
  Matrix adjacency;
  std::size_t self_loops_dropped = 0;
};

/// Loads an undirected edge list. Duplicate edges collapse to 1, self-loop
/// lines are dropped and counted. N is max id + 1 unless n_nodes is given.
EdgeListResult load_edge_list(const std::string& path,
                              std::optional<Index> n_nodes = std::nullopt);

/// Loads "node attr" pairs into a binary N x M matrix. M is max attr id + 1
/// unless n_attrs is given.
Matrix load_attributes(const std::string& path, Index n_nodes,
                       std::optional<Index> n_attrs = std::nullopt);

/// Loads "node label" lines; every node must be listed exactly once.
Labeling load_labels(const std::string& path, Index n_nodes);

/// Writes a matrix in the embedding format. Entries are written with 17
/// significant digits so that load(save(x)) round-trips exactly.
void save_embedding(const std::string& path, const Matrix& m);

Matrix load_embedding(const std::string& path);

} // namespace ahgr
