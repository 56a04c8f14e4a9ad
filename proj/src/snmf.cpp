#include "ahgr/snmf.hpp"

#include "ahgr/io.hpp"
#include "ahgr/rng.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace ahgr {

void SnmfConfig::validate() const {
  if (k < 1) throw param_error("snmf: k must be at least 1");
  if (lambda < 0) throw param_error("snmf: lambda must be non-negative");
  if (tol <= 0) throw param_error("snmf: tol must be positive");
  if (max_iter < 1) throw param_error("snmf: max_iter must be at least 1");
  if (epsilon <= 0) throw param_error("snmf: epsilon must be positive");
}

Matrix nndsvd_init(const Matrix& m, int k, double epsilon) {
  check_symmetric(m, "nndsvd_init");
  check_finite(m, "nndsvd_init");
  const Index n = m.rows();
  if (k < 1 || k > n)
    throw param_error("nndsvd_init: need 1 <= k <= n, got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n));
  if (m.minCoeff() < -1e-12)
    throw param_error("nndsvd_init: matrix has negative entries");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success)
    throw numeric_error("nndsvd_init: eigendecomposition failed");
  const Vector& values = eig.eigenvalues();
  const Matrix& vectors = eig.eigenvectors();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(values(a)) > std::abs(values(b));
  });

  Matrix x(n, k);
  for (int r = 0; r < k; ++r) {
    const double sigma = std::abs(values(order[static_cast<std::size_t>(r)]));
    const Vector u = vectors.col(order[static_cast<std::size_t>(r)]);
    Vector col;
    if (r == 0) {
      col = std::sqrt(sigma) * u.cwiseAbs();
    } else {
      // Split u u^T into its positive and negative sections and keep the one
      // with the larger norm product; the kept column gets squared norm
      // sigma * |side|^2.
      Vector pos = u.cwiseMax(0.0);
      Vector neg = (-u).cwiseMax(0.0);
      const Vector& side = pos.squaredNorm() >= neg.squaredNorm() ? pos : neg;
      // |sqrt(sigma) * side|^2 = sigma * |side|^2, the kept section's share.
      col = std::sqrt(sigma) * side;
    }
    x.col(r) = col.cwiseMax(0.0).cwiseMax(epsilon);
  }
  return x;
}

Matrix row_normalize(const Matrix& x) {
  check_finite(x, "row_normalize");
  Matrix out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    const double mu = row.mean();
    const double sigma = std::sqrt((row.array() - mu).square().mean());
    if (sigma == 0.0) {
      out.row(i).setZero();
      continue;
    }
    Eigen::RowVectorXd z = (row.array() - mu) / sigma;
    const double lo = z.minCoeff();
    const double hi = z.maxCoeff();
    out.row(i) = (z.array() - lo) / (hi - lo);
  }
  return out;
}

double snmf_objective(const Matrix& m, const Matrix& x, double lambda) {
  return 0.5 * (m - x * x.transpose()).squaredNorm() + lambda * x.squaredNorm();
}

BasicEmbedding snmf_embed(const Matrix& m, const SnmfConfig& cfg) {
  cfg.validate();
  check_symmetric(m, "snmf_embed");
  check_finite(m, "snmf_embed");
  const Index n = m.rows();
  if (cfg.k > n)
    throw param_error("snmf_embed: k exceeds matrix dimension");

  Matrix x;
  if (cfg.init == SnmfInit::Nndsvd) {
    x = nndsvd_init(m, cfg.k, cfg.epsilon);
  } else {
    Rng rng = derive_rng(cfg.seed, "snmf_init");
    x.resize(n, cfg.k);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < cfg.k; ++j) x(i, j) = rng.uniform_open();
  }

  BasicEmbedding result;
  double prev = snmf_objective(m, x, cfg.lambda);
  result.objective_trace.push_back(prev);
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const Matrix numer = m * x;
    const Matrix denom =
        (x * (x.transpose() * x) + cfg.lambda * x).array() + cfg.epsilon;
    x = x.cwiseProduct(numer.cwiseQuotient(denom));
    assert(x.minCoeff() >= 0.0);
    const double obj = snmf_objective(m, x, cfg.lambda);
    if (!std::isfinite(obj))
      throw numeric_error("snmf_embed: non-finite objective at iteration " +
                          std::to_string(iter + 1));
    result.objective_trace.push_back(obj);
    const double rel = std::abs(obj - prev) / std::max(prev, cfg.epsilon);
    prev = obj;
    if (rel < cfg.tol) {
      ++iter;
      break;
    }
  }
  result.x = std::move(x);
  result.x_hat = row_normalize(result.x);
  result.final_objective = prev;
  result.iterations = iter;
  return result;
}

BasicEmbedding import_basic_embedding(const std::string& path, Index expected_n,
                                      int expected_k) {
  Matrix raw = load_embedding(path);
  if (raw.rows() != expected_n || raw.cols() != expected_k)
    throw data_error("import_basic_embedding: " + path + " has shape " +
                     std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()) +
                     ", expected " + std::to_string(expected_n) + "x" +
                     std::to_string(expected_k));
  BasicEmbedding result;
  result.x_hat = row_normalize(raw);
  result.x = raw.cwiseMax(0.0);
  result.final_objective = 0.0;
  result.iterations = 0;
  return result;
}

} // namespace ahgr
