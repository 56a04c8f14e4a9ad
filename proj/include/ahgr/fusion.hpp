#pragma once

#include "ahgr/common.hpp"

#include <cstdint>
#include <vector>

namespace ahgr {

struct FusionConfig {
  int k = 64;
  std::vector<double> delta_per_source;  // delta_l, one per source
  double delta_y = 1.0;
  double tol = 1e-6;
  int max_iter = 1000;
  int restarts = 10;
  std::uint64_t seed = 0;
  double epsilon = 1e-12;

  void validate(std::size_t n_sources) const;
};

/// Result of the unified model solve: the shared embedding Y, per-source
/// transition matrices U_l, consistency indicators rho_l and the objective
/// trace of the winning restart.
struct FusionResult {
  Matrix y;                           // N x K, >= 0
  std::vector<Matrix> u;              // L matrices, K x K, >= 0
  std::vector<double> rho;            // L consistency indicators in [0,1]
  std::vector<double> objective_trace;
  int winning_restart = 0;
  int iterations = 0;
  bool converged = false;
};

/// sum_l (|Y U_l - Xhat_l|_F^2 + delta_l |U_l|_F^2) + delta_y |Y|_F^2
double fusion_objective(const Matrix& y, const std::vector<Matrix>& u_list,
                        const std::vector<Matrix>& xhat_list,
                        const std::vector<double>& delta_per_source,
                        double delta_y);

/// Gradient of the Y-restricted objective
/// sum_l |Y U_l - Xhat_l|^2 + delta_y |Y|^2 with respect to Y:
/// 2 sum_l (Y U_l U_l^T - Xhat_l U_l^T) + 2 delta_y Y.
Matrix y_gradient(const Matrix& y, const std::vector<Matrix>& u_list,
                  const std::vector<Matrix>& xhat_list, double delta_y);

/// Gradient of |Y U - Xhat|^2 + delta |U|^2 with respect to U:
/// 2 (Y^T Y U - Y^T Xhat) + 2 delta U.
Matrix u_gradient(const Matrix& y, const Matrix& u, const Matrix& xhat,
                  double delta);

/// One multiplicative update of Y:
/// Y <- Y * (sum_l Xhat_l U_l^T) / (Y (sum_l U_l U_l^T + delta_y I) + eps).
Matrix y_step(const Matrix& y, const std::vector<Matrix>& u_list,
              const std::vector<Matrix>& xhat_list, double delta_y,
              double epsilon = kEpsilon);

/// One multiplicative update of U_l:
/// U <- U * (Y^T Xhat) / (Y^T Y U + delta U + eps).
Matrix u_step(const Matrix& y, const Matrix& u, const Matrix& xhat,
              double delta, double epsilon = kEpsilon);

/// Consistency indicator: columns of U are normalized to sum 1 and
/// rho = mean_r (K |u_col|^2 - 1) / (K - 1), in [0,1]. Columns with sum below
/// epsilon are treated as uniform and contribute 0.
double consistency_indicator(const Matrix& u, double epsilon = kEpsilon);

/// One solve from given strictly positive initial factors. Alternates one
/// Y-step and then L U-steps per iteration until the relative objective
/// change drops below cfg.tol or cfg.max_iter is hit. rho is left empty.
FusionResult fit_single(Matrix y0, std::vector<Matrix> u0,
                        const std::vector<Matrix>& xhat_list,
                        const FusionConfig& cfg);

/// Full solve: cfg.restarts runs from uniform random (0,1) initializations
/// with per-restart RNG streams derived from (seed, restart index). Returns
/// the restart with the minimum final objective, with rho computed from its
/// transition matrices.
FusionResult fit(const std::vector<Matrix>& xhat_list, const FusionConfig& cfg);

} // namespace ahgr
