#pragma once

#include "ahgr/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ahgr {

enum class SnmfInit { Nndsvd, Random };

struct SnmfConfig {
  int k = 64;
  double lambda = 1.0;      // l2 regularization weight
  double tol = 1e-6;        // relative objective change stop threshold
  int max_iter = 1000;
  double epsilon = 1e-12;   // denominator guard
  SnmfInit init = SnmfInit::Nndsvd;
  std::uint64_t seed = 0;   // used by Random init only

  void validate() const;
};

/// Per-source non-negative factor X and its row-normalized form X_hat.
struct BasicEmbedding {
  int source_id = 0;
  Matrix x;      // N x K, entries >= 0
  Matrix x_hat;  // rows mapped into [0,1]; constant rows map to zero
  double final_objective = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;
};

/// Deterministic SVD-based non-negative initialization built from the K
/// largest-magnitude eigenpairs of a symmetric non-negative matrix. Entries
/// are floored at epsilon so subsequent multiplicative updates can grow them.
Matrix nndsvd_init(const Matrix& m, int k, double epsilon = kEpsilon);

/// Z-score then max-min normalization applied independently to each row;
/// constant rows map to all-zero rows.
Matrix row_normalize(const Matrix& x);

/// 0.5 * |M - X X^T|_F^2 + lambda * |X|_F^2
double snmf_objective(const Matrix& m, const Matrix& x, double lambda);

/// Solves the regularized symmetric NMF problem with multiplicative updates
///   X_ir <- X_ir * (M X)_ir / ((X X^T X + lambda X)_ir + eps)
/// until the relative objective change drops below tol or max_iter is hit.
BasicEmbedding snmf_embed(const Matrix& m, const SnmfConfig& cfg);

/// Reads an externally produced embedding (graph_model text format), checks
/// its dimensions and row-normalizes it. Negative raw entries are clamped at
/// zero in the stored X; X_hat is the row normalization of the raw matrix.
BasicEmbedding import_basic_embedding(const std::string& path, Index expected_n,
                                      int expected_k);

} // namespace ahgr
