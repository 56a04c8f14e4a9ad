#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ahgr/evaluate.hpp"
#include "ahgr/reweight.hpp"
#include "ahgr/synthetic.hpp"
#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

using namespace ahgr;

namespace {

SyntheticSpec base_spec(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  return spec;
}

} // namespace

TEST_CASE("generate: labels are the fixed block partition") {
  const AttributedGraph g = generate(base_spec(1));
  REQUIRE(g.labels.has_value());
  REQUIRE(g.labels->size() == 128);
  for (int i = 0; i < 128; ++i) CHECK((*g.labels)[i] == i / 32);
}

TEST_CASE("generate: adjacency is symmetric binary with zero diagonal") {
  for (std::uint64_t s : {2ULL, 3ULL, 4ULL}) {
    const AttributedGraph g = generate(base_spec(s));
    CHECK((g.adjacency - g.adjacency.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.adjacency.diagonal().isZero(0.0));
    for (Index i = 0; i < g.adjacency.size(); ++i) {
      const double v = g.adjacency.data()[i];
      CHECK((v == 0.0 || v == 1.0));
    }
    CHECK(g.attributes.minCoeff() >= 0.0);
    CHECK(g.attributes.maxCoeff() <= 1.0);
  }
}

TEST_CASE("generate: z_out = 0 yields no cross-cluster edges") {
  SyntheticSpec spec = base_spec(5);
  spec.z_in = 16;
  spec.z_out = 0;
  const AttributedGraph g = generate(spec);
  const Labeling& labels = *g.labels;
  for (Index i = 0; i < 128; ++i)
    for (Index j = 0; j < 128; ++j)
      if (labels[i] != labels[j]) CHECK(g.adjacency(i, j) == 0.0);
}

TEST_CASE("generate: h_out = 0 keeps attributes in the node's own block") {
  SyntheticSpec spec = base_spec(6);
  spec.h_in = 16;
  spec.h_out = 0;
  const AttributedGraph g = generate(spec);
  for (Index i = 0; i < 128; ++i)
    for (Index w = 0; w < 128; ++w)
      if (static_cast<int>(w / 32) != (*g.labels)[i])
        CHECK(g.attributes(i, w) == 0.0);
}

TEST_CASE("generate: mean degree matches the binomial expectation") {
  // Expectation 8*31/32 + 8; the variance follows the per-pair Bernoulli sum.
  const int samples = 50;
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const AttributedGraph g = generate(base_spec(1000 + s));
    acc += g.adjacency.sum() / 128.0;
  }
  const double mean_degree = acc / samples;
  const double p_in = 8.0 / 32.0, p_out = 8.0 / 96.0;
  const double within_pairs = 4.0 * (32.0 * 31.0 / 2.0);
  const double cross_pairs = 128.0 * 127.0 / 2.0 - within_pairs;
  const double expected_edges = within_pairs * p_in + cross_pairs * p_out;
  const double var_edges =
      within_pairs * p_in * (1 - p_in) + cross_pairs * p_out * (1 - p_out);
  const double expected_mean_degree = 2.0 * expected_edges / 128.0;
  CHECK(expected_mean_degree ==
        doctest::Approx(8.0 * 31.0 / 32.0 + 8.0)); // spec identity
  const double se = std::sqrt(4.0 * var_edges / (128.0 * 128.0) / samples);
  CHECK(std::abs(mean_degree - expected_mean_degree) <= 3.0 * se);
}

TEST_CASE("generate: fixed seed is bitwise deterministic") {
  const AttributedGraph a = generate(base_spec(42));
  const AttributedGraph b = generate(base_spec(42));
  CHECK(a.adjacency == b.adjacency);
  CHECK(a.attributes == b.attributes);
}

TEST_CASE("apply_inconsistency: gamma = 0 leaves the graph unchanged") {
  SyntheticSpec spec = base_spec(7);
  const AttributedGraph before = generate(spec);
  spec.kase = InconsistencyCase::SwapAttributes;
  spec.gamma_inc = 0.0;
  const AttributedGraph after = generate(spec);
  CHECK(before.adjacency == after.adjacency);
  CHECK(before.attributes == after.attributes);
}

TEST_CASE("apply_inconsistency: topology swap preserves symmetry and simplicity") {
  for (double gamma : {0.25, 0.5, 1.0}) {
    SyntheticSpec spec = base_spec(8);
    spec.kase = InconsistencyCase::SwapTopology;
    spec.gamma_inc = gamma;
    const AttributedGraph g = generate(spec);
    CHECK((g.adjacency - g.adjacency.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.adjacency.diagonal().isZero(0.0));
    // labels never modified
    for (int i = 0; i < 128; ++i) CHECK((*g.labels)[i] == i / 32);
  }
}

TEST_CASE("apply_inconsistency: attribute swap is a row permutation of C") {
  SyntheticSpec clean = base_spec(9);
  const AttributedGraph before = generate(clean);
  SyntheticSpec spec = clean;
  spec.kase = InconsistencyCase::SwapAttributes;
  spec.gamma_inc = 0.6;
  const AttributedGraph after = generate(spec);
  CHECK(before.adjacency == after.adjacency); // topology untouched
  // every row of the swapped C appears exactly once
  std::multiset<double> before_sums, after_sums;
  for (Index i = 0; i < 128; ++i) {
    before_sums.insert(before.attributes.row(i).sum() +
                       1e-3 * before.attributes.row(i).squaredNorm());
    after_sums.insert(after.attributes.row(i).sum() +
                      1e-3 * after.attributes.row(i).squaredNorm());
  }
  CHECK(before_sums == after_sums);
}

TEST_CASE("apply_inconsistency: full attribute swap destroys attribute-label NMI") {
  // Pilot-derived check: with h_out = 0 a clean cosine view clusters the
  // labels perfectly, and a full swap pushes the average NMI below 0.5.
  double acc = 0.0;
  const int graphs = 20;
  for (int t = 0; t < graphs; ++t) {
    SyntheticSpec spec = base_spec(2000 + t);
    spec.h_in = 16;
    spec.h_out = 0;
    spec.kase = InconsistencyCase::SwapAttributes;
    spec.gamma_inc = 1.0;
    const AttributedGraph g = generate(spec);
    const Matrix view = normalize_view(attribute_view(g.attributes));
    const Labeling pred = kmeans(view, 4, 3000 + t);
    acc += nmi(pred, *g.labels);
  }
  CHECK(acc / graphs < 0.5);
}

TEST_CASE("sweep: shape contract and csv format") {
  SweepConfig cfg;
  cfg.kase = InconsistencyCase::SwapAttributes;
  cfg.sweep = {0.0};
  cfg.trials = 1;
  cfg.k = 4;
  cfg.kmeans_runs = 3;
  cfg.snmf.max_iter = 60;
  cfg.fusion.restarts = 2;
  cfg.fusion.max_iter = 60;
  cfg.seed = 31;
  const auto rows = run_case_sweep(cfg);
  REQUIRE(rows.size() == 5); // 3 methods + 2 indicators
  CHECK(rows[0].series == "NMF-T");
  CHECK(rows[1].series == "NMF-A");
  CHECK(rows[2].series == "AHGR");
  CHECK(rows[3].series == "rho_T");
  CHECK(rows[4].series == "rho_A");
  for (const auto& r : rows) CHECK(r.stdev == 0.0); // single trial

  const auto path = std::filesystem::temp_directory_path() / "ahgr_sweep.csv";
  write_sweep_csv(path.string(), rows);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "sweep,series,mean,std");
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == rows.size());
  std::filesystem::remove(path);
}

TEST_CASE("sweep: noise cases map the sweep value onto h_out / z_out") {
  SweepConfig cfg;
  cfg.kase = InconsistencyCase::AttrNoise;
  cfg.sweep = {0.0, 12.0};
  cfg.trials = 2;
  cfg.k = 4;
  cfg.kmeans_runs = 5;
  cfg.snmf.max_iter = 150;
  cfg.fusion.restarts = 2;
  cfg.fusion.max_iter = 100;
  cfg.seed = 17;
  cfg.jobs = 2;
  const auto rows = run_case_sweep(cfg);
  REQUIRE(rows.size() == 10);
  // NMF-A should be much better with h_out = 0 than with h_out = 12
  const double nmi_a_clean = rows[1].mean;
  const double nmi_a_noisy = rows[6].mean;
  CHECK(rows[1].series == "NMF-A");
  CHECK(rows[6].series == "NMF-A");
  CHECK(nmi_a_clean > nmi_a_noisy + 0.2);
}

TEST_CASE("sweep presets") {
  const SweepConfig plain = sweep_preset(InconsistencyCase::SwapAttributes, false);
  CHECK(plain.sweep.size() == 11);
  CHECK(plain.delta_a == std::vector<double>{1.0});
  const SweepConfig prior = sweep_preset(InconsistencyCase::SwapAttributes, true);
  CHECK(prior.delta_a.size() == 11);
  CHECK(prior.delta_a.back() == 10.0);
  CHECK(prior.delta_t == std::vector<double>{1.0});
  const SweepConfig noise = sweep_preset(InconsistencyCase::TopoNoise, true);
  CHECK(noise.sweep.size() == 13);
  CHECK(noise.delta_t.size() == 13);
}

TEST_CASE("spec validation") {
  SyntheticSpec spec;
  spec.z_in = 9; // sum != 16
  CHECK_THROWS_AS(generate(spec), param_error);
  spec = SyntheticSpec{};
  spec.gamma_inc = 1.5;
  CHECK_THROWS_AS(generate(spec), param_error);
}
