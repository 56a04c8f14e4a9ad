#include "ahgr/fusion.hpp"

#include "ahgr/rng.hpp"

#include <cassert>
#include <cmath>
#include <optional>

namespace ahgr {

void FusionConfig::validate(std::size_t n_sources) const {
  if (n_sources == 0)
    throw param_error("fusion: at least one source is required");
  if (k < 1) throw param_error("fusion: k must be at least 1");
  if (delta_per_source.size() != n_sources)
    throw param_error("fusion: delta_per_source has " +
                      std::to_string(delta_per_source.size()) +
                      " entries for " + std::to_string(n_sources) + " sources");
  for (double d : delta_per_source)
    if (d < 0) throw param_error("fusion: delta_l must be non-negative");
  if (delta_y < 0) throw param_error("fusion: delta_y must be non-negative");
  if (tol <= 0) throw param_error("fusion: tol must be positive");
  if (max_iter < 1) throw param_error("fusion: max_iter must be at least 1");
  if (restarts < 1) throw param_error("fusion: restarts must be at least 1");
  if (epsilon <= 0) throw param_error("fusion: epsilon must be positive");
}

namespace {

void check_shapes(const Matrix& y, const std::vector<Matrix>& u_list,
                  const std::vector<Matrix>& xhat_list) {
  if (u_list.size() != xhat_list.size())
    throw param_error("fusion: U and Xhat lists differ in length");
  const Index n = y.rows(), k = y.cols();
  for (std::size_t l = 0; l < u_list.size(); ++l) {
    if (u_list[l].rows() != k || u_list[l].cols() != k)
      throw param_error("fusion: U_" + std::to_string(l) + " is not K x K");
    if (xhat_list[l].rows() != n || xhat_list[l].cols() != k)
      throw param_error("fusion: Xhat_" + std::to_string(l) + " is not N x K");
  }
}

} // namespace

double fusion_objective(const Matrix& y, const std::vector<Matrix>& u_list,
                        const std::vector<Matrix>& xhat_list,
                        const std::vector<double>& delta_per_source,
                        double delta_y) {
  check_shapes(y, u_list, xhat_list);
  if (delta_per_source.size() != u_list.size())
    throw param_error("fusion_objective: delta list length mismatch");
  double value = delta_y * y.squaredNorm();
  for (std::size_t l = 0; l < u_list.size(); ++l) {
    value += (y * u_list[l] - xhat_list[l]).squaredNorm() +
             delta_per_source[l] * u_list[l].squaredNorm();
  }
  return value;
}

Matrix y_gradient(const Matrix& y, const std::vector<Matrix>& u_list,
                  const std::vector<Matrix>& xhat_list, double delta_y) {
  check_shapes(y, u_list, xhat_list);
  Matrix g = 2.0 * delta_y * y;
  for (std::size_t l = 0; l < u_list.size(); ++l)
    g += 2.0 * (y * u_list[l] - xhat_list[l]) * u_list[l].transpose();
  return g;
}

Matrix u_gradient(const Matrix& y, const Matrix& u, const Matrix& xhat,
                  double delta) {
  return 2.0 * (y.transpose() * (y * u - xhat)) + 2.0 * delta * u;
}

Matrix y_step(const Matrix& y, const std::vector<Matrix>& u_list,
              const std::vector<Matrix>& xhat_list, double delta_y,
              double epsilon) {
  check_shapes(y, u_list, xhat_list);
  const Index k = y.cols();
  Matrix numer = Matrix::Zero(y.rows(), k);
  Matrix gram = delta_y * Matrix::Identity(k, k);
  for (std::size_t l = 0; l < u_list.size(); ++l) {
    numer += xhat_list[l] * u_list[l].transpose();
    gram += u_list[l] * u_list[l].transpose();
  }
  const Matrix denom = (y * gram).array() + epsilon;
  Matrix out = y.cwiseProduct(numer.cwiseQuotient(denom));
  if (!out.allFinite())
    throw numeric_error("y_step: non-finite update");
  return out;
}

Matrix u_step(const Matrix& y, const Matrix& u, const Matrix& xhat,
              double delta, double epsilon) {
  const Matrix numer = y.transpose() * xhat;
  const Matrix denom =
      ((y.transpose() * y) * u + delta * u).array() + epsilon;
  Matrix out = u.cwiseProduct(numer.cwiseQuotient(denom));
  if (!out.allFinite())
    throw numeric_error("u_step: non-finite update");
  return out;
}

double consistency_indicator(const Matrix& u, double epsilon) {
  const Index k = u.rows();
  if (u.cols() != k)
    throw param_error("consistency_indicator: U must be square");
  if (k < 2)
    throw param_error("consistency_indicator: K must be at least 2");
  if (u.minCoeff() < 0)
    throw param_error("consistency_indicator: U has negative entries");
  double acc = 0.0;
  for (Index r = 0; r < k; ++r) {
    const double col_sum = u.col(r).sum();
    if (col_sum <= epsilon) continue; // uniform by convention, contributes 0
    const double sq = (u.col(r) / col_sum).squaredNorm();
    acc += (static_cast<double>(k) * sq - 1.0) / (static_cast<double>(k) - 1.0);
  }
  return acc / static_cast<double>(k);
}

FusionResult fit_single(Matrix y, std::vector<Matrix> u,
                        const std::vector<Matrix>& xhat_list,
                        const FusionConfig& cfg) {
  cfg.validate(xhat_list.size());
  check_shapes(y, u, xhat_list);
  const std::size_t n_sources = xhat_list.size();

  FusionResult result;
  double prev =
      fusion_objective(y, u, xhat_list, cfg.delta_per_source, cfg.delta_y);
  if (!std::isfinite(prev))
    throw numeric_error("fusion: non-finite initial objective");
  result.objective_trace.push_back(prev);

  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    y = y_step(y, u, xhat_list, cfg.delta_y, cfg.epsilon);
    for (std::size_t l = 0; l < n_sources; ++l)
      u[l] = u_step(y, u[l], xhat_list[l], cfg.delta_per_source[l], cfg.epsilon);
    assert(y.minCoeff() >= 0.0);
    const double obj =
        fusion_objective(y, u, xhat_list, cfg.delta_per_source, cfg.delta_y);
    if (!std::isfinite(obj))
      throw numeric_error("fusion: non-finite objective at iteration " +
                          std::to_string(iter + 1));
    result.objective_trace.push_back(obj);
    const double rel = std::abs(obj - prev) / std::max(prev, cfg.epsilon);
    prev = obj;
    if (rel < cfg.tol) {
      ++iter;
      result.converged = true;
      break;
    }
  }
  result.y = std::move(y);
  result.u = std::move(u);
  result.iterations = iter;
  return result;
}

FusionResult fit(const std::vector<Matrix>& xhat_list, const FusionConfig& cfg) {
  cfg.validate(xhat_list.size());
  const std::size_t n_sources = xhat_list.size();
  const Index n = xhat_list.front().rows();
  for (std::size_t l = 0; l < n_sources; ++l) {
    const Matrix& xh = xhat_list[l];
    if (xh.rows() != n || xh.cols() != cfg.k)
      throw param_error("fit: Xhat_" + std::to_string(l) + " is not N x K");
    check_finite(xh, "fit: Xhat_" + std::to_string(l));
    if (xh.minCoeff() < -1e-9 || xh.maxCoeff() > 1.0 + 1e-9)
      throw param_error("fit: Xhat_" + std::to_string(l) +
                        " has entries outside [0,1]; row-normalize it first");
  }

  std::optional<FusionResult> best;
  std::string first_failure;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = derive_rng(cfg.seed, "restart", static_cast<std::uint64_t>(r));
    Matrix y0(n, cfg.k);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < cfg.k; ++j) y0(i, j) = rng.uniform_open();
    std::vector<Matrix> u0(n_sources);
    for (auto& u : u0) {
      u.resize(cfg.k, cfg.k);
      for (Index i = 0; i < cfg.k; ++i)
        for (Index j = 0; j < cfg.k; ++j) u(i, j) = rng.uniform_open();
    }
    try {
      FusionResult run = fit_single(std::move(y0), std::move(u0), xhat_list, cfg);
      if (!best || run.objective_trace.back() < best->objective_trace.back()) {
        run.winning_restart = r;
        best = std::move(run);
      }
    } catch (const numeric_error& e) {
      if (first_failure.empty()) first_failure = e.what();
    }
  }
  if (!best)
    throw numeric_error("fit: all " + std::to_string(cfg.restarts) +
                        " restarts failed numerically; first failure: " +
                        first_failure);
  if (cfg.k >= 2) {
    best->rho.reserve(n_sources);
    for (const Matrix& u : best->u)
      best->rho.push_back(consistency_indicator(u, cfg.epsilon));
  }
  return *best;
}

} // namespace ahgr
