#pragma once

#include "ahgr/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ahgr {

/// Lloyd's algorithm with k-means++ seeding. Nearest-centroid ties break to
/// the lowest centroid index; empty clusters are reseeded to the point
/// farthest from its current centroid. Stops when assignments stabilize or
/// after 300 iterations.
Labeling kmeans(const Matrix& x, int k, std::uint64_t seed);

/// NMI = 2 I(a;b) / (H(a) + H(b)) with natural-log entropies. Two identical
/// single-cluster partitions give 1; otherwise zero entropy on either side
/// gives 0.
double nmi(const Labeling& a, const Labeling& b);

/// Fraction of nodes matched under the optimal one-to-one cluster-to-class
/// assignment (Hungarian algorithm on the negated contingency matrix).
double clustering_accuracy(const Labeling& pred, const Labeling& truth);

/// Unweighted mean of per-class F1 over the classes present in truth.
double macro_f1(const Labeling& pred, const Labeling& truth);

/// Minimum-cost perfect assignment on a square cost matrix. Returns the
/// optimal cost; if row_of_col is non-null it receives the assigned row for
/// each column.
double hungarian(const Matrix& cost, std::vector<int>* row_of_col = nullptr);

/// One-vs-rest linear classifiers minimizing squared-hinge loss with an L2
/// penalty, trained by full-batch gradient descent with backtracking line
/// search from zero weights.
struct LinearModel {
  Matrix weights;            // n_classes x dim
  Vector bias;               // n_classes
  std::vector<int> classes;  // class ids present in training data
};

LinearModel train_linear_classifier(const Matrix& x_train, const Labeling& y_train,
                                    double reg_strength = 1.0);

/// Argmax class score; ties break to the lowest class id. Classes absent from
/// training are never predicted.
Labeling predict(const LinearModel& model, const Matrix& x);

struct ClusteringReport {
  double nmi_mean = 0, nmi_std = 0;
  double ac_mean = 0, ac_std = 0;
  int runs = 0;
};

struct ClassificationReport {
  double ac_mean = 0, ac_std = 0;
  double f1_mean = 0, f1_std = 0;
  double train_fraction = 0.1;
  int runs = 0;
};

ClusteringReport evaluate_clustering(const Matrix& y, const Labeling& truth,
                                     int k, int runs = 100,
                                     std::uint64_t seed = 0);

ClassificationReport evaluate_classification(const Matrix& y, const Labeling& truth,
                                             double train_fraction = 0.1,
                                             int runs = 100,
                                             std::uint64_t seed = 0,
                                             double reg_strength = 1.0);

void write_report_csv(const std::string& path, const ClusteringReport& report);
void write_report_csv(const std::string& path, const ClassificationReport& report);

} // namespace ahgr
