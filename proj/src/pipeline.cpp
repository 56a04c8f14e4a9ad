#include "ahgr/pipeline.hpp"

#include "ahgr/io.hpp"
#include "ahgr/parallel.hpp"
#include "ahgr/rng.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <utility>

namespace fs = std::filesystem;

namespace ahgr {

void PipelineConfig::validate() const {
  if (h_max < 0) throw param_error("pipeline: h_max must be non-negative");
  if (h_max == 0 && !include_community && !include_attributes &&
      external_embeddings.empty())
    throw param_error("pipeline: no information sources selected");
  if (k < 1) throw param_error("pipeline: k must be at least 1");
  if (!delta_t_steps.empty() &&
      delta_t_steps.size() != static_cast<std::size_t>(h_max))
    throw param_error("pipeline: delta_t_steps needs one value per proximity step");
}

namespace {

const std::map<std::string, Profile>& profiles() {
  // Recommended settings per bundled dataset profile: proximity depth h and
  // the regularizer vector (delta_T, delta_C, delta_A, delta).
  static const std::map<std::string, Profile> table = {
      {"cornell",     {1, 5, 5, 1, 1}},
      {"texas",       {1, 10, 10, 1, 1}},
      {"washington",  {1, 5, 5, 1, 1}},
      {"wisconsin",   {1, 10, 10, 1, 1}},
      {"twitter",     {3, 10, 1, 10, 10}},
      {"gplus",       {2, 1, 1, 1, 10}},
      {"cora",        {4, 1, 1, 1, 10}},
      {"citeseer",    {1, 5, 5, 1, 10}},
      {"uai2010",     {2, 10, 1, 1, 10}},
      {"blogcatalog", {2, 5, 1, 1, 1}},
      {"flickr",      {2, 10, 1, 10, 10}},
  };
  return table;
}

// 64-bit FNV-1a over the raw bytes of the view matrix and the solver
// parameters; keys the on-disk basic-embedding cache.
std::uint64_t cache_key(const Matrix& view, const SnmfConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(view.data(), sizeof(double) * static_cast<std::size_t>(view.size()));
  mix(&cfg.k, sizeof(cfg.k));
  mix(&cfg.lambda, sizeof(cfg.lambda));
  mix(&cfg.tol, sizeof(cfg.tol));
  mix(&cfg.max_iter, sizeof(cfg.max_iter));
  mix(&cfg.epsilon, sizeof(cfg.epsilon));
  mix(&cfg.init, sizeof(cfg.init));
  mix(&cfg.seed, sizeof(cfg.seed));
  return h;
}

struct ExternalSpec {
  std::string label;
  std::string path;
};

ExternalSpec parse_external(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size())
    throw param_error("pipeline: --external-embedding expects label=path, got \"" +
                      arg + "\"");
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

class OutputTracker {
public:
  explicit OutputTracker(std::vector<std::string>& sink) : sink_(sink) {}

  std::string track(const fs::path& p) {
    sink_.push_back(p.string());
    return p.string();
  }

  void rollback() {
    for (const auto& p : sink_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    sink_.clear();
  }

private:
  std::vector<std::string>& sink_;
};

void write_rho_csv(const std::string& path, const std::vector<std::string>& labels,
                   const std::vector<double>& rho) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open file for writing: " + path);
  out << "source,rho\n";
  char buf[96];
  for (std::size_t l = 0; l < rho.size(); ++l) {
    std::snprintf(buf, sizeof(buf), "%s,%.6g\n", labels[l].c_str(), rho[l]);
    out << buf;
  }
}

void write_trace_csv(const std::string& path, const std::vector<double>& trace) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open file for writing: " + path);
  out << "iter,objective\n";
  char buf[64];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", i, trace[i]);
    out << buf;
  }
}

} // namespace

const Profile* find_profile(const std::string& name) {
  const auto it = profiles().find(name);
  return it == profiles().end() ? nullptr : &it->second;
}

std::vector<std::string> profile_names() {
  std::vector<std::string> names;
  for (const auto& [name, p] : profiles()) names.push_back(name);
  return names;
}

PipelineOutcome run_pipeline(const std::string& edges_path,
                             const std::string& attrs_path,
                             const std::string& labels_path,
                             const PipelineConfig& cfg,
                             const std::string& out_dir) {
  cfg.validate();
  PipelineOutcome outcome;
  OutputTracker tracker(outcome.written_files);
  try {
    const AttributedGraph graph = [&] {
      AttributedGraph g;
      auto loaded = load_edge_list(edges_path);
      g.adjacency = std::move(loaded.adjacency);
      if (cfg.include_attributes) {
        if (attrs_path.empty())
          throw param_error("pipeline: --attributes requires an attribute file "
                            "(--attrs)");
        g.attributes = load_attributes(attrs_path, g.n_nodes());
      }
      if (!labels_path.empty())
        g.labels = load_labels(labels_path, g.n_nodes());
      return g;
    }();
    const Index n = graph.n_nodes();

    std::vector<SourceView> views;
    if (cfg.h_max > 0 || cfg.include_community || cfg.include_attributes)
      views = build_views(graph, cfg.h_max, cfg.include_community,
                          cfg.include_attributes);

    fs::create_directories(out_dir);
    if (cfg.dump_views) {
      fs::create_directories(fs::path(out_dir) / "views");
      for (const SourceView& v : views)
        save_embedding(
            tracker.track(fs::path(out_dir) / "views" / (v.label() + ".mat")),
            v.matrix);
    }

    // Externals either replace a built view's embedding or add a new source.
    std::map<std::string, std::string> replacements;
    std::vector<ExternalSpec> additions;
    for (const std::string& arg : cfg.external_embeddings) {
      ExternalSpec ext = parse_external(arg);
      bool matches_view = false;
      for (const SourceView& v : views)
        if (v.label() == ext.label) matches_view = true;
      if (matches_view)
        replacements[ext.label] = ext.path;
      else
        additions.push_back(std::move(ext));
    }

    struct Source {
      std::string label;
      SourceKind kind;
      const Matrix* view = nullptr;   // null for externals
      std::string external_path;
      double lambda = 1.0;
      double delta = 1.0;
    };
    std::vector<Source> sources;
    for (std::size_t i = 0; i < views.size(); ++i) {
      const SourceView& v = views[i];
      Source s;
      s.label = v.label();
      s.kind = v.kind;
      s.view = &v.matrix;
      switch (v.kind) {
        case SourceKind::Proximity:
          s.lambda = cfg.lambda_t;
          s.delta = cfg.delta_t_steps.empty()
                        ? cfg.delta_t
                        : cfg.delta_t_steps[static_cast<std::size_t>(v.step - 1)];
          break;
        case SourceKind::Community:
          s.lambda = cfg.lambda_c;
          s.delta = cfg.delta_c;
          break;
        default:
          s.lambda = cfg.lambda_a;
          s.delta = cfg.delta_a;
          break;
      }
      if (auto it = replacements.find(s.label); it != replacements.end()) {
        s.external_path = it->second;
        s.view = nullptr;
      }
      sources.push_back(std::move(s));
    }
    for (const ExternalSpec& ext : additions)
      sources.push_back(
          {ext.label, SourceKind::External, nullptr, ext.path, 0.0,
           cfg.delta_external});

    const fs::path cache_dir = fs::path(out_dir) / "cache";
    if (cfg.use_cache) fs::create_directories(cache_dir);

    std::vector<BasicEmbedding> embeddings(sources.size());
    parallel_for(sources.size(), cfg.jobs, [&](std::size_t i) {
      const Source& s = sources[i];
      if (!s.external_path.empty()) {
        embeddings[i] = import_basic_embedding(s.external_path, n, cfg.k);
        return;
      }
      SnmfConfig snmf;
      snmf.k = cfg.k;
      snmf.lambda = s.lambda;
      snmf.tol = cfg.snmf_tol;
      snmf.max_iter = cfg.snmf_max_iter;
      snmf.seed = derive_seed(cfg.seed, "view", i);
      if (cfg.use_cache) {
        const fs::path entry =
            cache_dir / (s.label + "_" + std::to_string(cache_key(*s.view, snmf)) +
                         ".emb");
        if (fs::exists(entry)) {
          Matrix x = load_embedding(entry.string());
          embeddings[i].x_hat = row_normalize(x);
          embeddings[i].x = std::move(x);
          return;
        }
        embeddings[i] = snmf_embed(*s.view, snmf);
        save_embedding(entry.string(), embeddings[i].x); // reusable, not tracked
        return;
      }
      embeddings[i] = snmf_embed(*s.view, snmf);
    });
    for (std::size_t i = 0; i < embeddings.size(); ++i)
      embeddings[i].source_id = static_cast<int>(i);

    std::vector<Matrix> xhats;
    FusionConfig fusion;
    fusion.k = cfg.k;
    fusion.delta_y = cfg.delta_y;
    fusion.tol = cfg.tol;
    fusion.max_iter = cfg.max_iter;
    fusion.restarts = cfg.restarts;
    fusion.seed = derive_seed(cfg.seed, "fusion");
    for (std::size_t i = 0; i < sources.size(); ++i) {
      xhats.push_back(embeddings[i].x_hat);
      fusion.delta_per_source.push_back(sources[i].delta);
      outcome.source_labels.push_back(sources[i].label);
    }
    outcome.fusion = fit(xhats, fusion);

    for (std::size_t i = 0; i < sources.size(); ++i)
      save_embedding(
          tracker.track(fs::path(out_dir) / ("basic_" + sources[i].label + ".emb")),
          embeddings[i].x);
    save_embedding(tracker.track(fs::path(out_dir) / "Y.emb"), outcome.fusion.y);
    for (std::size_t i = 0; i < sources.size(); ++i)
      save_embedding(
          tracker.track(fs::path(out_dir) / ("U_" + sources[i].label + ".emb")),
          outcome.fusion.u[i]);
    if (!outcome.fusion.rho.empty())
      write_rho_csv(tracker.track(fs::path(out_dir) / "rho.csv"),
                    outcome.source_labels, outcome.fusion.rho);
    write_trace_csv(tracker.track(fs::path(out_dir) / "trace.csv"),
                    outcome.fusion.objective_trace);

    if (graph.labels) {
      const int classes = label_count(*graph.labels);
      outcome.clustering =
          evaluate_clustering(outcome.fusion.y, *graph.labels, classes,
                              cfg.eval_runs, derive_seed(cfg.seed, "run", 0));
      write_report_csv(tracker.track(fs::path(out_dir) / "clustering.csv"),
                       *outcome.clustering);
      outcome.classification = evaluate_classification(
          outcome.fusion.y, *graph.labels, cfg.train_fraction, cfg.eval_runs,
          derive_seed(cfg.seed, "run", 1), cfg.reg_strength);
      write_report_csv(tracker.track(fs::path(out_dir) / "classification.csv"),
                       *outcome.classification);
    }
    return outcome;
  } catch (...) {
    tracker.rollback();
    throw;
  }
}

} // namespace ahgr
