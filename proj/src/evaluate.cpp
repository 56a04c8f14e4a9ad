#include "ahgr/evaluate.hpp"

#include "ahgr/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

namespace ahgr {

namespace {

constexpr int kMaxLloydIterations = 300;

void check_equal_lengths(const Labeling& a, const Labeling& b,
                         const std::string& what) {
  if (a.size() != b.size())
    throw param_error(what + ": labelings differ in length (" +
                      std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
}

// Remaps arbitrary label ids to 0..k-1, keeping the order of first appearance
// of sorted ids.
std::vector<int> compact(const Labeling& labels, int& k_out) {
  std::map<int, int> remap;
  for (int v : labels) remap.emplace(v, 0);
  int next = 0;
  for (auto& [id, slot] : remap) slot = next++;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = remap[labels[i]];
  k_out = next;
  return out;
}

Matrix contingency(const std::vector<int>& a, int ka, const std::vector<int>& b,
                   int kb) {
  Matrix c = Matrix::Zero(ka, kb);
  for (std::size_t i = 0; i < a.size(); ++i) c(a[i], b[i]) += 1.0;
  return c;
}

double entropy(const Vector& counts, double n) {
  double h = 0.0;
  for (Index i = 0; i < counts.size(); ++i) {
    if (counts(i) > 0) {
      const double p = counts(i) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

} // namespace

Labeling kmeans(const Matrix& x, int k, std::uint64_t seed) {
  const Index n = x.rows();
  if (k < 1 || k > n)
    throw param_error("kmeans: need 1 <= k <= n, got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n));
  check_finite(x, "kmeans");
  Rng rng(seed);

  // k-means++ seeding
  Matrix centroids(k, x.cols());
  centroids.row(0) = x.row(static_cast<Index>(rng.uniform_int(n)));
  Vector d2 = (x.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick;
    if (total <= 0.0) {
      pick = static_cast<Index>(rng.uniform_int(n));
    } else {
      double target = rng.uniform() * total;
      pick = n - 1;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (target < acc) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    bool changed = false;
    std::fill(counts.begin(), counts.end(), 0);
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (x.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
      ++counts[best];
    }
    if (!changed && iter > 0) break;

    Matrix sums = Matrix::Zero(k, x.cols());
    for (Index i = 0; i < n; ++i) sums.row(assign[i]) += x.row(i);
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) = sums.row(c) / counts[c];
        continue;
      }
      // reseed an empty cluster to the point farthest from its own centroid
      Index far = 0;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const double d = (x.row(i) - centroids.row(assign[i])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centroids.row(c) = x.row(far);
      taken[far] = true;
    }
  }
  return assign;
}

double nmi(const Labeling& a, const Labeling& b) {
  check_equal_lengths(a, b, "nmi");
  if (a.empty()) throw param_error("nmi: empty labelings");
  int ka = 0, kb = 0;
  const auto ca = compact(a, ka);
  const auto cb = compact(b, kb);
  const double n = static_cast<double>(a.size());
  const Matrix table = contingency(ca, ka, cb, kb);
  const Vector row_sums = table.rowwise().sum();
  const Vector col_sums = table.colwise().sum().transpose();
  const double ha = entropy(row_sums, n);
  const double hb = entropy(col_sums, n);
  if (ha == 0.0 && hb == 0.0) return 1.0; // identical single-cluster partitions
  if (ha == 0.0 || hb == 0.0) return 0.0;
  double mi = 0.0;
  for (Index i = 0; i < table.rows(); ++i) {
    for (Index j = 0; j < table.cols(); ++j) {
      if (table(i, j) > 0) {
        const double pij = table(i, j) / n;
        mi += pij * std::log(pij * n * n / (row_sums(i) * col_sums(j)));
      }
    }
  }
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

double hungarian(const Matrix& cost, std::vector<int>* row_of_col) {
  const Index n = cost.rows();
  if (cost.cols() != n)
    throw param_error("hungarian: cost matrix must be square");
  if (n == 0) return 0.0;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Potentials method, O(n^3). Internally 1-indexed; column 0 is virtual.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const Index i0 = p[j0];
      double delta = kInf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  if (row_of_col) row_of_col->assign(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= n; ++j) {
    total += cost(p[j] - 1, j - 1);
    if (row_of_col) (*row_of_col)[j - 1] = static_cast<int>(p[j] - 1);
  }
  return total;
}

double clustering_accuracy(const Labeling& pred, const Labeling& truth) {
  check_equal_lengths(pred, truth, "clustering_accuracy");
  if (pred.empty()) throw param_error("clustering_accuracy: empty labelings");
  int kp = 0, kt = 0;
  const auto cp = compact(pred, kp);
  const auto ct = compact(truth, kt);
  const Index s = std::max(kp, kt);
  Matrix cost = Matrix::Zero(s, s); // rectangular case padded with zeros
  for (std::size_t i = 0; i < cp.size(); ++i) cost(cp[i], ct[i]) -= 1.0;
  const double matched = -hungarian(cost);
  return matched / static_cast<double>(pred.size());
}

double macro_f1(const Labeling& pred, const Labeling& truth) {
  check_equal_lengths(pred, truth, "macro_f1");
  if (pred.empty()) throw param_error("macro_f1: empty labelings");
  std::map<int, std::array<double, 3>> tallies; // class -> {tp, fp, fn}
  for (int c : truth) tallies.emplace(c, std::array<double, 3>{0, 0, 0});
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == truth[i]) {
      tallies[truth[i]][0] += 1.0;
    } else {
      auto it = tallies.find(pred[i]);
      if (it != tallies.end()) it->second[1] += 1.0;
      tallies[truth[i]][2] += 1.0;
    }
  }
  double sum = 0.0;
  for (const auto& [c, t] : tallies) {
    const auto [tp, fp, fn] = t;
    const double denom = 2.0 * tp + fp + fn;
    sum += denom > 0 ? 2.0 * tp / denom : 0.0;
  }
  return sum / static_cast<double>(tallies.size());
}

LinearModel train_linear_classifier(const Matrix& x_train, const Labeling& y_train,
                                    double reg_strength) {
  if (static_cast<std::size_t>(x_train.rows()) != y_train.size())
    throw param_error("train_linear_classifier: rows of X and labels differ");
  if (y_train.empty())
    throw param_error("train_linear_classifier: empty training set");
  check_finite(x_train, "train_linear_classifier");

  std::map<int, int> seen;
  for (int c : y_train) seen.emplace(c, 0);
  LinearModel model;
  model.classes.reserve(seen.size());
  for (auto& [c, slot] : seen) {
    slot = static_cast<int>(model.classes.size());
    model.classes.push_back(c);
  }
  const Index n = x_train.rows(), d = x_train.cols();
  const int nc = static_cast<int>(model.classes.size());
  model.weights = Matrix::Zero(nc, d);
  model.bias = Vector::Zero(nc);

  constexpr int kMaxGdIterations = 500;
  for (int c = 0; c < nc; ++c) {
    Vector t(n);
    for (Index i = 0; i < n; ++i)
      t(i) = y_train[i] == model.classes[c] ? 1.0 : -1.0;

    Vector w = Vector::Zero(d);
    double b = 0.0;
    auto loss = [&](const Vector& wv, double bv) {
      const Vector margin =
          (Vector::Ones(n) - t.cwiseProduct(x_train * wv + Vector::Constant(n, bv)))
              .cwiseMax(0.0);
      return margin.squaredNorm() + reg_strength * wv.squaredNorm();
    };
    double f = loss(w, b);
    double step = 1.0;
    for (int iter = 0; iter < kMaxGdIterations; ++iter) {
      const Vector score = x_train * w + Vector::Constant(n, b);
      const Vector margin = (Vector::Ones(n) - t.cwiseProduct(score)).cwiseMax(0.0);
      const Vector coeff = -2.0 * margin.cwiseProduct(t);
      Vector gw = x_train.transpose() * coeff + 2.0 * reg_strength * w;
      const double gb = coeff.sum();
      const double g2 = gw.squaredNorm() + gb * gb;
      if (g2 < 1e-12 * std::max(1.0, f)) break;
      // backtracking line search (Armijo)
      step *= 2.0;
      double fn;
      while (true) {
        fn = loss(w - step * gw, b - step * gb);
        if (fn <= f - 0.5 * step * g2 || step < 1e-18) break;
        step *= 0.5;
      }
      if (fn >= f) break;
      w -= step * gw;
      b -= step * gb;
      f = fn;
    }
    model.weights.row(c) = w.transpose();
    model.bias(c) = b;
  }
  return model;
}

Labeling predict(const LinearModel& model, const Matrix& x) {
  if (x.cols() != model.weights.cols())
    throw param_error("predict: feature dimension mismatch");
  const Matrix scores =
      (x * model.weights.transpose()).rowwise() + model.bias.transpose();
  Labeling out(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i) {
    Index best = 0;
    scores.row(i).maxCoeff(&best); // Eigen returns the first (lowest) maximizer
    out[i] = model.classes[static_cast<std::size_t>(best)];
  }
  return out;
}

namespace {

struct Moments {
  double mean = 0, stdev = 0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - m.mean) * (v - m.mean);
  m.stdev = std::sqrt(acc / static_cast<double>(values.size()));
  return m;
}

} // namespace

ClusteringReport evaluate_clustering(const Matrix& y, const Labeling& truth,
                                     int k, int runs, std::uint64_t seed) {
  if (static_cast<std::size_t>(y.rows()) != truth.size())
    throw param_error("evaluate_clustering: embedding rows and labels differ");
  if (runs < 1) throw param_error("evaluate_clustering: runs must be positive");
  std::vector<double> nmis, acs;
  nmis.reserve(runs);
  acs.reserve(runs);
  for (int r = 0; r < runs; ++r) {
    const Labeling pred =
        kmeans(y, k, derive_seed(seed, "kmeans", static_cast<std::uint64_t>(r)));
    nmis.push_back(nmi(pred, truth));
    acs.push_back(clustering_accuracy(pred, truth));
  }
  ClusteringReport report;
  const auto mn = moments(nmis);
  const auto ma = moments(acs);
  report.nmi_mean = mn.mean;
  report.nmi_std = mn.stdev;
  report.ac_mean = ma.mean;
  report.ac_std = ma.stdev;
  report.runs = runs;
  return report;
}

ClassificationReport evaluate_classification(const Matrix& y, const Labeling& truth,
                                             double train_fraction, int runs,
                                             std::uint64_t seed,
                                             double reg_strength) {
  if (static_cast<std::size_t>(y.rows()) != truth.size())
    throw param_error("evaluate_classification: embedding rows and labels differ");
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw param_error("evaluate_classification: train_fraction must be in (0,1)");
  if (runs < 1) throw param_error("evaluate_classification: runs must be positive");
  const Index n = y.rows();
  const Index n_train = std::clamp<Index>(
      static_cast<Index>(std::llround(train_fraction * static_cast<double>(n))),
      1, n - 1);

  std::vector<double> acs, f1s;
  acs.reserve(runs);
  f1s.reserve(runs);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (int r = 0; r < runs; ++r) {
    std::iota(order.begin(), order.end(), Index{0});
    Rng rng = derive_rng(seed, "split", static_cast<std::uint64_t>(r));
    rng.shuffle(order);

    Matrix x_train(n_train, y.cols());
    Labeling y_train(static_cast<std::size_t>(n_train));
    Matrix x_test(n - n_train, y.cols());
    Labeling y_test(static_cast<std::size_t>(n - n_train));
    for (Index i = 0; i < n_train; ++i) {
      x_train.row(i) = y.row(order[i]);
      y_train[i] = truth[order[i]];
    }
    for (Index i = n_train; i < n; ++i) {
      x_test.row(i - n_train) = y.row(order[i]);
      y_test[i - n_train] = truth[order[i]];
    }
    const LinearModel model =
        train_linear_classifier(x_train, y_train, reg_strength);
    const Labeling pred = predict(model, x_test);
    double correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (pred[i] == y_test[i]) ++correct;
    acs.push_back(correct / static_cast<double>(pred.size()));
    f1s.push_back(macro_f1(pred, y_test));
  }
  ClassificationReport report;
  const auto ma = moments(acs);
  const auto mf = moments(f1s);
  report.ac_mean = ma.mean;
  report.ac_std = ma.stdev;
  report.f1_mean = mf.mean;
  report.f1_std = mf.stdev;
  report.train_fraction = train_fraction;
  report.runs = runs;
  return report;
}

namespace {

void write_metric_rows(std::ofstream& out,
                       std::initializer_list<std::tuple<const char*, double, double>> rows,
                       int runs) {
  char buf[128];
  out << "metric,mean,std,runs\n";
  for (const auto& [name, mean, stdev] : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%d\n", name, mean, stdev, runs);
    out << buf;
  }
}

} // namespace

void write_report_csv(const std::string& path, const ClusteringReport& report) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open file for writing: " + path);
  write_metric_rows(out,
                    {{"nmi", report.nmi_mean, report.nmi_std},
                     {"ac", report.ac_mean, report.ac_std}},
                    report.runs);
}

void write_report_csv(const std::string& path, const ClassificationReport& report) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open file for writing: " + path);
  write_metric_rows(out,
                    {{"ac", report.ac_mean, report.ac_std},
                     {"macro_f1", report.f1_mean, report.f1_std}},
                    report.runs);
}

} // namespace ahgr
