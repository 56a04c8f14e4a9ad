#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ahgr/reweight.hpp"
#include "oracles.hpp"

using namespace ahgr;

namespace {

Matrix path_graph3() {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1;
  a(1, 2) = a(2, 1) = 1;
  return a;
}

Matrix triangle() {
  Matrix a = Matrix::Ones(3, 3);
  a.diagonal().setZero();
  return a;
}

} // namespace

TEST_CASE("proximity: walk counts") {
  const auto views = proximity_views(path_graph3(), 2);
  REQUIRE(views.size() == 2);
  CHECK(views[0] == path_graph3()); // h=1 is A itself
  Matrix expected(3, 3);
  expected << 1, 0, 1, 0, 2, 0, 1, 0, 1;
  CHECK(views[1] == expected);

  const auto tri = proximity_views(triangle(), 2);
  CHECK(tri[1].diagonal() == Vector::Constant(3, 2.0)); // two closed 2-walks

  CHECK_THROWS_AS(proximity_views(triangle(), 0), param_error);
}

TEST_CASE("proximity: A^h = A^{h-1} * A against naive multiplication") {
  Rng rng(11);
  for (int t = 0; t < 5; ++t) {
    const Matrix a = oracle::random_adjacency(20, 0.2, rng);
    const auto views = proximity_views(a, 4);
    for (std::size_t h = 1; h < views.size(); ++h) {
      const Matrix ref = oracle::naive_multiply(views[h - 1], a);
      CHECK((views[h] - ref).cwiseAbs().maxCoeff() == 0.0);
      CHECK((views[h] - views[h].transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("modularity: hand examples") {
  Matrix edge = Matrix::Zero(2, 2);
  edge(0, 1) = edge(1, 0) = 1;
  Matrix b = modularity_view(edge);
  CHECK(b(0, 0) == doctest::Approx(-0.5));
  CHECK(b(0, 1) == doctest::Approx(0.5));

  b = modularity_view(triangle());
  CHECK(b(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(b(0, 0) == doctest::Approx(-2.0 / 3.0));

  CHECK_THROWS_AS(modularity_view(Matrix::Zero(3, 3)), data_error);
}

TEST_CASE("modularity: rows sum to zero on random graphs") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_adjacency(30, 0.15, rng);
    if (a.sum() == 0) continue;
    const Matrix b = modularity_view(a);
    CHECK(b.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((b - b.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("attribute view: cosine cases") {
  Matrix c(3, 3);
  c << 1, 1, 0,
       1, 0, 1,
       0, 0, 0;
  const Matrix s = attribute_view(c);
  CHECK(s(0, 1) == doctest::Approx(0.5));
  CHECK(s(0, 0) == doctest::Approx(1.0));
  CHECK(s(2, 0) == 0.0); // zero attribute row
  CHECK(s(2, 2) == 0.0);
  CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);

  Matrix same(2, 3);
  same << 1, 0, 1, 1, 0, 1;
  CHECK(attribute_view(same)(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("attribute view: entries in [0,1], unit diagonal for nonempty rows") {
  Rng rng(31);
  for (int t = 0; t < 5; ++t) {
    Matrix c = Matrix::Zero(12, 20);
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j)
        if (rng.uniform() < 0.3) c(i, j) = 1.0;
    const Matrix s = attribute_view(c);
    CHECK(s.minCoeff() >= 0.0);
    CHECK(s.maxCoeff() <= 1.0 + 1e-12);
    for (Index i = 0; i < c.rows(); ++i)
      if (c.row(i).sum() > 0)
        CHECK(std::abs(s(i, i) - 1.0) <= 1e-12);
  }
}

TEST_CASE("normalize: affine composition equals plain min-max") {
  Matrix m(1, 3);
  m << 0, 5, 10;
  Matrix n = normalize_view(m);
  CHECK(n(0, 0) == doctest::Approx(0.0));
  CHECK(n(0, 1) == doctest::Approx(0.5));
  CHECK(n(0, 2) == doctest::Approx(1.0));

  CHECK(normalize_view(Matrix::Constant(3, 3, 7.0)).isZero(0.0));

  Matrix two(1, 2);
  two << 1, 2;
  n = normalize_view(two);
  CHECK(n(0, 0) == 0.0);
  CHECK(n(0, 1) == 1.0);
}

TEST_CASE("normalize: z-score then min-max equals min-max when sigma > 0") {
  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const Matrix raw = oracle::random_matrix(8, 8, rng, -3.0, 5.0);
    const Matrix got = normalize_view(raw);
    const double lo = raw.minCoeff(), hi = raw.maxCoeff();
    const Matrix plain = (raw.array() - lo) / (hi - lo);
    CHECK((got - plain).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("normalize preserves symmetry within 1e-12") {
  Rng rng(43);
  for (int t = 0; t < 10; ++t) {
    const Matrix raw = oracle::random_symmetric_nonneg(15, rng);
    const Matrix got = normalize_view(raw);
    CHECK((got - got.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("build_views: order, count, normalization") {
  AttributedGraph g;
  Rng graph_rng(51);
  g.adjacency = oracle::random_adjacency(16, 0.3, graph_rng);
  g.attributes = Matrix::Zero(16, 10);
  Rng rng(52);
  for (Index i = 0; i < 16; ++i)
    for (Index j = 0; j < 10; ++j)
      if (rng.uniform() < 0.4) g.attributes(i, j) = 1.0;

  const auto views = build_views(g, 2, true, true);
  REQUIRE(views.size() == 4);
  CHECK(views[0].kind == SourceKind::Proximity);
  CHECK(views[0].step == 1);
  CHECK(views[0].label() == "proximity_1");
  CHECK(views[1].step == 2);
  CHECK(views[2].kind == SourceKind::Community);
  CHECK(views[3].kind == SourceKind::Attributes);
  for (const auto& v : views) {
    CHECK(v.matrix.minCoeff() == doctest::Approx(0.0));
    CHECK(v.matrix.maxCoeff() == doctest::Approx(1.0));
  }

  CHECK_THROWS_AS(build_views(g, 0, false, false), param_error);
}

TEST_CASE("build_views: community view of a single edge") {
  AttributedGraph g;
  g.adjacency = Matrix::Zero(2, 2);
  g.adjacency(0, 1) = g.adjacency(1, 0) = 1;
  const auto views = build_views(g, 1, true, false);
  REQUIRE(views.size() == 2);
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  CHECK((views[1].matrix - expected).cwiseAbs().maxCoeff() <= 1e-12);
}
