#include "ahgr/synthetic.hpp"

#include "ahgr/evaluate.hpp"
#include "ahgr/parallel.hpp"
#include "ahgr/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace ahgr {

void SyntheticSpec::validate() const {
  if (n_clusters < 1 || p < 1 || q < 1)
    throw param_error("synthetic: cluster geometry must be positive");
  if (n_nodes != n_clusters * p)
    throw param_error("synthetic: n_nodes must equal n_clusters * p");
  if (n_attrs != n_clusters * q)
    throw param_error("synthetic: n_attrs must equal n_clusters * q");
  if (z_in < 0 || z_out < 0 || std::abs(z_in + z_out - 16.0) > 1e-9)
    throw param_error("synthetic: z_in + z_out must equal 16");
  if (h_in < 0 || h_out < 0 || std::abs(h_in + h_out - 16.0) > 1e-9)
    throw param_error("synthetic: h_in + h_out must equal 16");
  if (gamma_inc < 0.0 || gamma_inc > 1.0)
    throw param_error("synthetic: gamma_inc must be in [0,1]");
}

namespace {

std::vector<std::pair<Index, Index>> pick_swap_pairs(Index n, double gamma,
                                                     const Labeling& labels,
                                                     bool cross_only, Rng& rng) {
  const auto count = static_cast<std::size_t>(gamma * static_cast<double>(n));
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  rng.shuffle(all);
  std::vector<Index> selected(all.begin(), all.begin() + count);
  if (selected.size() % 2 == 1)
    selected.erase(selected.begin() +
                   static_cast<std::ptrdiff_t>(rng.uniform_int(selected.size())));
  rng.shuffle(selected);
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(selected.size() / 2);
  if (!cross_only) {
    for (std::size_t i = 0; i + 1 < selected.size(); i += 2)
      pairs.emplace_back(selected[i], selected[i + 1]);
    return pairs;
  }
  // Prefer partners from different clusters; fall back to any partner when
  // only same-cluster nodes remain in the pool.
  std::vector<Index> pool(selected.begin(), selected.end());
  while (pool.size() >= 2) {
    const Index a = pool.back();
    pool.pop_back();
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (labels[pool[i]] != labels[a]) candidates.push_back(i);
    std::size_t pick = candidates.empty()
                           ? rng.uniform_int(pool.size())
                           : candidates[rng.uniform_int(candidates.size())];
    pairs.emplace_back(a, pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return pairs;
}

} // namespace

void apply_inconsistency(Matrix& adjacency, Matrix& attributes,
                         const Labeling& labels, const SyntheticSpec& spec) {
  if (spec.kase != InconsistencyCase::SwapAttributes &&
      spec.kase != InconsistencyCase::SwapTopology)
    return; // noise cases are realized at generation time
  if (spec.gamma_inc <= 0.0) return;
  Rng rng = derive_rng(spec.seed, "swap");
  const auto pairs = pick_swap_pairs(adjacency.rows(), spec.gamma_inc, labels,
                                     spec.cross_cluster_pairs_only, rng);
  for (auto [a, b] : pairs) {
    if (spec.kase == InconsistencyCase::SwapAttributes) {
      attributes.row(a).swap(attributes.row(b));
    } else {
      adjacency.row(a).swap(adjacency.row(b));
      adjacency.col(a).swap(adjacency.col(b));
    }
  }
}

AttributedGraph generate(const SyntheticSpec& spec) {
  spec.validate();
  const Index n = spec.n_nodes;
  const Index m = spec.n_attrs;
  Labeling labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i / spec.p);

  const double p_in = spec.z_in / spec.p;
  const double p_out = spec.z_out / (3.0 * spec.p);
  Rng topo_rng = derive_rng(spec.seed, "topology");
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double pr = labels[i] == labels[j] ? p_in : p_out;
      if (topo_rng.bernoulli(pr)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }

  const double a_in = spec.h_in / spec.q;
  const double a_out = spec.h_out / (3.0 * spec.q);
  Rng attr_rng = derive_rng(spec.seed, "attributes");
  Matrix c = Matrix::Zero(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index w = 0; w < m; ++w) {
      const double pr = static_cast<int>(w / spec.q) == labels[i] ? a_in : a_out;
      if (attr_rng.bernoulli(pr)) c(i, w) = 1.0;
    }
  }

  apply_inconsistency(a, c, labels, spec);

  AttributedGraph graph;
  graph.adjacency = std::move(a);
  graph.attributes = std::move(c);
  graph.labels = std::move(labels);
  return graph;
}

void SweepConfig::validate() const {
  if (kase == InconsistencyCase::None)
    throw param_error("sweep: choose one of cases 1-4");
  if (sweep.empty()) throw param_error("sweep: empty sweep value list");
  if (trials < 1) throw param_error("sweep: trials must be positive");
  if (kmeans_runs < 1) throw param_error("sweep: kmeans_runs must be positive");
  auto check_schedule = [&](const std::vector<double>& d, const char* name) {
    if (d.size() != 1 && d.size() != sweep.size())
      throw param_error(std::string("sweep: ") + name +
                        " must have 1 entry or one per sweep value");
    for (double v : d)
      if (v < 0) throw param_error(std::string("sweep: ") + name +
                                   " entries must be non-negative");
  };
  check_schedule(delta_t, "delta_t");
  check_schedule(delta_a, "delta_a");
}

SweepConfig sweep_preset(InconsistencyCase kase, bool prior_knowledge) {
  SweepConfig cfg;
  cfg.kase = kase;
  const bool swap_case = kase == InconsistencyCase::SwapAttributes ||
                         kase == InconsistencyCase::SwapTopology;
  if (swap_case) {
    for (int i = 0; i <= 10; ++i) cfg.sweep.push_back(0.1 * i);
  } else {
    for (int i = 0; i <= 12; ++i) cfg.sweep.push_back(i);
  }
  if (!prior_knowledge) return cfg;
  // Schedules for the variant with prior knowledge: the inconsistent source's
  // delta grows along the sweep. The 13-point noise schedule extends the
  // published 12-value sequence by repeating its last value.
  std::vector<double> schedule;
  if (swap_case) {
    schedule = {1, 1, 2, 2, 3, 5, 5, 10, 10, 10, 10};
  } else {
    schedule = {1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 5, 5, 5};
  }
  switch (kase) {
    case InconsistencyCase::SwapAttributes:
    case InconsistencyCase::AttrNoise:
      cfg.delta_a = schedule;
      break;
    default:
      cfg.delta_t = schedule;
      break;
  }
  return cfg;
}

namespace {

struct TrialOutcome {
  double nmi_t = 0, nmi_a = 0, nmi_y = 0;
  double rho_t = 0, rho_a = 0;
};

SyntheticSpec spec_for(const SweepConfig& cfg, double value, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.kase = cfg.kase;
  spec.seed = seed;
  spec.cross_cluster_pairs_only = cfg.cross_cluster_pairs_only;
  switch (cfg.kase) {
    case InconsistencyCase::SwapAttributes:
    case InconsistencyCase::SwapTopology:
      spec.gamma_inc = value;
      break;
    case InconsistencyCase::AttrNoise:
      spec.h_out = value;
      spec.h_in = 16.0 - value;
      break;
    case InconsistencyCase::TopoNoise:
      spec.z_out = value;
      spec.z_in = 16.0 - value;
      break;
    case InconsistencyCase::None:
      break;
  }
  return spec;
}

double schedule_at(const std::vector<double>& d, std::size_t sweep_idx) {
  return d.size() == 1 ? d.front() : d[sweep_idx];
}

double mean_kmeans_nmi(const Matrix& embedding, const Labeling& truth, int k,
                       int runs, std::uint64_t seed) {
  double acc = 0.0;
  for (int r = 0; r < runs; ++r) {
    const Labeling pred = kmeans(
        embedding, k, derive_seed(seed, "kmeans", static_cast<std::uint64_t>(r)));
    acc += nmi(pred, truth);
  }
  return acc / runs;
}

TrialOutcome run_trial(const SweepConfig& cfg, double value,
                       std::size_t sweep_idx, std::size_t trial_idx) {
  const std::uint64_t trial_seed =
      derive_seed(cfg.seed, "trial", sweep_idx, trial_idx);
  const AttributedGraph graph = generate(spec_for(cfg, value, trial_seed));
  const Labeling& truth = *graph.labels;

  // The protocol uses exactly two sources: 1-step proximity and attributes.
  SnmfConfig snmf_t = cfg.snmf;
  snmf_t.k = cfg.k;
  snmf_t.lambda = cfg.lambda_t;
  SnmfConfig snmf_a = snmf_t;
  snmf_a.lambda = cfg.lambda_a;
  const BasicEmbedding emb_t =
      snmf_embed(normalize_view(graph.adjacency), snmf_t);
  const BasicEmbedding emb_a =
      snmf_embed(normalize_view(attribute_view(graph.attributes)), snmf_a);

  FusionConfig fusion = cfg.fusion;
  fusion.k = cfg.k;
  fusion.delta_per_source = {schedule_at(cfg.delta_t, sweep_idx),
                             schedule_at(cfg.delta_a, sweep_idx)};
  fusion.delta_y = cfg.delta_y;
  fusion.seed = derive_seed(trial_seed, "fusion");
  const FusionResult fused = fit({emb_t.x_hat, emb_a.x_hat}, fusion);

  TrialOutcome out;
  const int k_clusters = label_count(truth);
  out.nmi_t = mean_kmeans_nmi(emb_t.x, truth, k_clusters, cfg.kmeans_runs,
                              derive_seed(trial_seed, "eval", 0));
  out.nmi_a = mean_kmeans_nmi(emb_a.x, truth, k_clusters, cfg.kmeans_runs,
                              derive_seed(trial_seed, "eval", 1));
  out.nmi_y = mean_kmeans_nmi(fused.y, truth, k_clusters, cfg.kmeans_runs,
                              derive_seed(trial_seed, "eval", 2));
  out.rho_t = fused.rho[0];
  out.rho_a = fused.rho[1];
  return out;
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                      static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return {mean, std::sqrt(acc / static_cast<double>(v.size()))};
}

} // namespace

std::vector<SweepRow> run_case_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::size_t n_sweep = cfg.sweep.size();
  const auto n_trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutcome> outcomes(n_sweep * n_trials);
  parallel_for(outcomes.size(), cfg.jobs, [&](std::size_t idx) {
    const std::size_t s = idx / n_trials;
    const std::size_t t = idx % n_trials;
    outcomes[idx] = run_trial(cfg, cfg.sweep[s], s, t);
  });

  std::vector<SweepRow> rows;
  rows.reserve(n_sweep * 5);
  for (std::size_t s = 0; s < n_sweep; ++s) {
    std::vector<double> nmi_t, nmi_a, nmi_y, rho_t, rho_a;
    for (std::size_t t = 0; t < n_trials; ++t) {
      const TrialOutcome& o = outcomes[s * n_trials + t];
      nmi_t.push_back(o.nmi_t);
      nmi_a.push_back(o.nmi_a);
      nmi_y.push_back(o.nmi_y);
      rho_t.push_back(o.rho_t);
      rho_a.push_back(o.rho_a);
    }
    const std::pair<const char*, std::vector<double>*> series[] = {
        {"NMF-T", &nmi_t}, {"NMF-A", &nmi_a}, {"AHGR", &nmi_y},
        {"rho_T", &rho_t}, {"rho_A", &rho_a}};
    for (const auto& [name, values] : series) {
      const auto [mean, stdev] = mean_std(*values);
      rows.push_back({cfg.sweep[s], name, mean, stdev});
    }
  }
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open file for writing: " + path);
  out << "sweep,series,mean,std\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6g,%s,%.6g,%.6g\n", r.sweep,
                  r.series.c_str(), r.mean, r.stdev);
    out << buf;
  }
  if (!out) throw data_error("write failed: " + path);
}

} // namespace ahgr
