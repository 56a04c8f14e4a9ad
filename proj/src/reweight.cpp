#include "ahgr/reweight.hpp"

#include <cmath>

namespace ahgr {

std::string SourceView::label() const {
  switch (kind) {
    case SourceKind::Proximity:  return "proximity_" + std::to_string(step);
    case SourceKind::Community:  return "community";
    case SourceKind::Attributes: return "attributes";
    case SourceKind::External:   return name.empty() ? "external" : name;
  }
  return "unknown";
}

std::vector<Matrix> proximity_views(const Matrix& adjacency, int h_max) {
  if (h_max < 1)
    throw param_error("proximity_views: h_max must be at least 1");
  std::vector<Matrix> views;
  views.reserve(static_cast<std::size_t>(h_max));
  views.push_back(adjacency);
  for (int h = 2; h <= h_max; ++h)
    views.push_back(views.back() * adjacency);
  return views;
}

Matrix modularity_view(const Matrix& adjacency) {
  const Vector degrees = adjacency.rowwise().sum();
  const double two_e = degrees.sum();
  if (two_e <= 0.0)
    throw data_error("modularity_view: graph has no edges");
  return adjacency - (degrees * degrees.transpose()) / two_e;
}

Matrix attribute_view(const Matrix& attributes) {
  const Index n = attributes.rows();
  const Vector norms = attributes.rowwise().norm();
  Matrix s = attributes * attributes.transpose();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double d = norms(i) * norms(j);
      s(i, j) = d > 0.0 ? s(i, j) / d : 0.0;
    }
  }
  return s;
}

Matrix normalize_view(const Matrix& raw) {
  check_finite(raw, "normalize_view");
  if (raw.size() == 0) return raw;
  const double mu = raw.mean();
  const double sigma = std::sqrt((raw.array() - mu).square().mean());
  if (sigma == 0.0)
    return Matrix::Zero(raw.rows(), raw.cols());
  Matrix z = (raw.array() - mu) / sigma;
  const double lo = z.minCoeff();
  const double hi = z.maxCoeff();
  return (z.array() - lo) / (hi - lo);
}

std::vector<SourceView> build_views(const AttributedGraph& graph, int h_max,
                                    bool include_community,
                                    bool include_attributes) {
  if (h_max < 0)
    throw param_error("build_views: h_max must be non-negative");
  if (h_max == 0 && !include_community && !include_attributes)
    throw param_error("build_views: no information sources selected");
  std::vector<SourceView> views;
  if (h_max >= 1) {
    auto powers = proximity_views(graph.adjacency, h_max);
    for (int h = 1; h <= h_max; ++h) {
      SourceView v;
      v.kind = SourceKind::Proximity;
      v.step = h;
      v.matrix = normalize_view(powers[static_cast<std::size_t>(h - 1)]);
      views.push_back(std::move(v));
    }
  }
  if (include_community) {
    SourceView v;
    v.kind = SourceKind::Community;
    v.matrix = normalize_view(modularity_view(graph.adjacency));
    views.push_back(std::move(v));
  }
  if (include_attributes) {
    if (graph.n_attrs() == 0)
      throw data_error("build_views: attribute source requested but the graph "
                       "has no attributes");
    SourceView v;
    v.kind = SourceKind::Attributes;
    v.matrix = normalize_view(attribute_view(graph.attributes));
    views.push_back(std::move(v));
  }
  return views;
}

} // namespace ahgr
