#include "ahgr/cli.hpp"

#include "ahgr/io.hpp"
#include "ahgr/pipeline.hpp"
#include "ahgr/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

namespace ahgr::cli {

namespace {

struct CommonArgs {
  std::string edges, attrs, labels, out;
  std::uint64_t seed = 0;
  int jobs = 1;
};

void add_fusion_flags(CLI::App* cmd, FusionConfig& f) {
  cmd->add_option("--tol", f.tol, "Relative-error convergence threshold")
      ->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap per restart")
      ->capture_default_str();
  cmd->add_option("--restarts", f.restarts, "Random restarts, best kept")
      ->capture_default_str();
}

int run_pipeline_cmd(const CommonArgs& common, PipelineConfig& cfg,
                     const std::string& profile, const CLI::App* cmd) {
  if (!profile.empty()) {
    const Profile* p = find_profile(profile);
    if (!p) {
      std::string names;
      for (const auto& n : profile_names()) names += " " + n;
      throw param_error("unknown profile \"" + profile + "\"; available:" + names);
    }
    if (!cmd->count("--h-max")) cfg.h_max = p->h;
    if (!cmd->count("--delta-t")) cfg.delta_t = p->delta_t;
    if (!cmd->count("--delta-c")) cfg.delta_c = p->delta_c;
    if (!cmd->count("--delta-a")) cfg.delta_a = p->delta_a;
    if (!cmd->count("--delta-y")) cfg.delta_y = p->delta_y;
    if (!cmd->count("--community") && !cmd->count("--no-community"))
      cfg.include_community = true;
    if (!cmd->count("--attributes") && !cmd->count("--no-attributes"))
      cfg.include_attributes = true;
  }
  cfg.seed = common.seed;
  cfg.jobs = common.jobs;
  const PipelineOutcome outcome = run_pipeline(
      common.edges, common.attrs, common.labels, cfg, common.out);
  std::printf("fused %zu sources, %d iterations, winning restart %d\n",
              outcome.source_labels.size(), outcome.fusion.iterations,
              outcome.fusion.winning_restart);
  for (std::size_t l = 0; l < outcome.fusion.rho.size(); ++l)
    std::printf("rho[%s] = %.4f\n", outcome.source_labels[l].c_str(),
                outcome.fusion.rho[l]);
  if (outcome.clustering)
    std::printf("clustering: nmi %.4f +- %.4f, ac %.4f +- %.4f\n",
                outcome.clustering->nmi_mean, outcome.clustering->nmi_std,
                outcome.clustering->ac_mean, outcome.clustering->ac_std);
  if (outcome.classification)
    std::printf("classification: ac %.4f +- %.4f, macro-f1 %.4f +- %.4f\n",
                outcome.classification->ac_mean, outcome.classification->ac_std,
                outcome.classification->f1_mean, outcome.classification->f1_std);
  return 0;
}

int run_synth_cmd(SweepConfig& cfg, int case_id, const std::string& preset,
                  const std::string& out, const CLI::App* cmd) {
  if (case_id < 1 || case_id > 4)
    throw param_error("synth: --case must be in 1..4");
  cfg.kase = static_cast<InconsistencyCase>(case_id);
  SweepConfig defaults = sweep_preset(cfg.kase, preset == "prior");
  if (cfg.sweep.empty()) cfg.sweep = defaults.sweep;
  if (!cmd->count("--delta-t")) cfg.delta_t = defaults.delta_t;
  if (!cmd->count("--delta-a")) cfg.delta_a = defaults.delta_a;
  const auto rows = run_case_sweep(cfg);
  write_sweep_csv(out, rows);
  std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());
  return 0;
}

int run_eval_cmd(const std::string& embedding_path, const std::string& labels_path,
                 const std::string& task, int k, int runs, double train_fraction,
                 double reg, std::uint64_t seed, const std::string& out) {
  const Matrix y = load_embedding(embedding_path);
  const Labeling truth = load_labels(labels_path, y.rows());
  if (task == "cluster") {
    const int clusters = k > 0 ? k : label_count(truth);
    const ClusteringReport report =
        evaluate_clustering(y, truth, clusters, runs, seed);
    write_report_csv(out, report);
    std::printf("nmi %.4f +- %.4f, ac %.4f +- %.4f (%d runs)\n", report.nmi_mean,
                report.nmi_std, report.ac_mean, report.ac_std, report.runs);
  } else if (task == "classify") {
    const ClassificationReport report =
        evaluate_classification(y, truth, train_fraction, runs, seed, reg);
    write_report_csv(out, report);
    std::printf("ac %.4f +- %.4f, macro-f1 %.4f +- %.4f (%d runs)\n",
                report.ac_mean, report.ac_std, report.f1_mean, report.f1_std,
                report.runs);
  } else {
    throw param_error("eval: --task must be cluster or classify");
  }
  return 0;
}

int run_reweight_cmd(const CommonArgs& common, int h_max, bool community,
                     bool attributes) {
  AttributedGraph graph;
  graph.adjacency = load_edge_list(common.edges).adjacency;
  if (attributes) {
    if (common.attrs.empty())
      throw param_error("reweight: --attributes requires an attribute file "
                        "(--attrs)");
    graph.attributes = load_attributes(common.attrs, graph.n_nodes());
  }
  const auto views = build_views(graph, h_max, community, attributes);
  fs::create_directories(common.out);
  for (const SourceView& v : views) {
    const auto path = (fs::path(common.out) / (v.label() + ".mat")).string();
    save_embedding(path, v.matrix);
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

int run_embed_basic_cmd(const CommonArgs& common, const std::string& kind, int h,
                        SnmfConfig& snmf, const std::string& init) {
  AttributedGraph graph;
  graph.adjacency = load_edge_list(common.edges).adjacency;
  Matrix view;
  if (kind == "proximity") {
    view = normalize_view(proximity_views(graph.adjacency, h).back());
  } else if (kind == "community") {
    view = normalize_view(modularity_view(graph.adjacency));
  } else if (kind == "attributes") {
    if (common.attrs.empty())
      throw param_error("embed-basic: --kind attributes requires --attrs");
    graph.attributes = load_attributes(common.attrs, graph.n_nodes());
    view = normalize_view(attribute_view(graph.attributes));
  } else {
    throw param_error("embed-basic: --kind must be proximity, community or "
                      "attributes");
  }
  if (init == "random")
    snmf.init = SnmfInit::Random;
  else if (init != "nndsvd")
    throw param_error("embed-basic: --init must be nndsvd or random");
  snmf.seed = common.seed;
  const BasicEmbedding embedding = snmf_embed(view, snmf);
  save_embedding(common.out, embedding.x);
  std::printf("wrote %s (%d iterations, objective %.6g)\n", common.out.c_str(),
              embedding.iterations, embedding.final_objective);
  return 0;
}

int run_fuse_cmd(const std::vector<std::string>& inputs,
                 std::vector<double> deltas, FusionConfig& fusion,
                 std::uint64_t seed, const std::string& out) {
  if (inputs.empty()) throw param_error("fuse: at least one --input is required");
  std::vector<Matrix> xhats;
  std::vector<std::string> labels;
  Index n = -1;
  int k = -1;
  for (const std::string& path : inputs) {
    Matrix raw = load_embedding(path);
    if (n < 0) {
      n = raw.rows();
      k = static_cast<int>(raw.cols());
    }
    BasicEmbedding e = import_basic_embedding(path, n, k);
    xhats.push_back(std::move(e.x_hat));
    labels.push_back(fs::path(path).stem().string());
  }
  if (deltas.empty()) deltas.assign(inputs.size(), 1.0);
  if (deltas.size() == 1) deltas.assign(inputs.size(), deltas.front());
  if (deltas.size() != inputs.size())
    throw param_error("fuse: --delta needs one value total or one per input");
  fusion.k = k;
  fusion.delta_per_source = std::move(deltas);
  fusion.seed = seed;
  const FusionResult result = fit(xhats, fusion);
  fs::create_directories(out);
  save_embedding((fs::path(out) / "Y.emb").string(), result.y);
  for (std::size_t l = 0; l < result.u.size(); ++l)
    save_embedding((fs::path(out) / ("U_" + labels[l] + ".emb")).string(),
                   result.u[l]);
  std::printf("fused %zu sources, %d iterations, final objective %.6g\n",
              xhats.size(), result.iterations, result.objective_trace.back());
  for (std::size_t l = 0; l < result.rho.size(); ++l)
    std::printf("rho[%s] = %.4f\n", labels[l].c_str(), result.rho[l]);
  return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"ahgr: adaptive multi-source attributed-graph embedding"};
  app.require_subcommand(1);

  CommonArgs common;
  PipelineConfig pipeline_cfg;
  std::string profile;

  auto* pipeline = app.add_subcommand(
      "pipeline", "Full run: ingest, reweight, embed, fuse, evaluate");
  pipeline->add_option("--edges", common.edges, "Edge list file")->required();
  pipeline->add_option("--attrs", common.attrs, "Attribute pair file");
  pipeline->add_option("--labels", common.labels, "Ground-truth label file");
  pipeline->add_option("--out", common.out, "Output directory")->required();
  pipeline->add_option("--h-max", pipeline_cfg.h_max,
                       "Highest proximity step h")->capture_default_str();
  pipeline->add_flag("--community,!--no-community", pipeline_cfg.include_community,
                     "Include the community-structure source")
      ->capture_default_str();
  pipeline->add_flag("--attributes,!--no-attributes",
                     pipeline_cfg.include_attributes,
                     "Include the node-attribute source")
      ->capture_default_str();
  pipeline->add_option("--k", pipeline_cfg.k, "Embedding dimensionality")
      ->capture_default_str();
  pipeline->add_option("--lambda-t", pipeline_cfg.lambda_t,
                       "SNMF regularizer for proximity sources")
      ->capture_default_str();
  pipeline->add_option("--lambda-c", pipeline_cfg.lambda_c,
                       "SNMF regularizer for the community source")
      ->capture_default_str();
  pipeline->add_option("--lambda-a", pipeline_cfg.lambda_a,
                       "SNMF regularizer for the attribute source")
      ->capture_default_str();
  pipeline->add_option("--delta-t", pipeline_cfg.delta_t,
                       "Transition regularizer for proximity sources")
      ->capture_default_str();
  pipeline->add_option("--delta-t-steps", pipeline_cfg.delta_t_steps,
                       "Per-step proximity deltas (comma list, overrides "
                       "--delta-t)")
      ->delimiter(',');
  pipeline->add_option("--delta-c", pipeline_cfg.delta_c,
                       "Transition regularizer for the community source")
      ->capture_default_str();
  pipeline->add_option("--delta-a", pipeline_cfg.delta_a,
                       "Transition regularizer for the attribute source")
      ->capture_default_str();
  pipeline->add_option("--delta-external", pipeline_cfg.delta_external,
                       "Transition regularizer for added external sources")
      ->capture_default_str();
  pipeline->add_option("--delta-y", pipeline_cfg.delta_y,
                       "Regularizer on the shared embedding Y")
      ->capture_default_str();
  pipeline->add_option("--snmf-tol", pipeline_cfg.snmf_tol,
                       "SNMF convergence threshold")->capture_default_str();
  pipeline->add_option("--snmf-max-iter", pipeline_cfg.snmf_max_iter,
                       "SNMF iteration cap")->capture_default_str();
  pipeline->add_option("--tol", pipeline_cfg.tol,
                       "Fusion convergence threshold")->capture_default_str();
  pipeline->add_option("--max-iter", pipeline_cfg.max_iter,
                       "Fusion iteration cap per restart")->capture_default_str();
  pipeline->add_option("--restarts", pipeline_cfg.restarts,
                       "Fusion random restarts")->capture_default_str();
  pipeline->add_option("--eval-runs", pipeline_cfg.eval_runs,
                       "Evaluation repetitions")->capture_default_str();
  pipeline->add_option("--train-fraction", pipeline_cfg.train_fraction,
                       "Classification training fraction")->capture_default_str();
  pipeline->add_option("--external-embedding", pipeline_cfg.external_embeddings,
                       "label=path of an externally computed basic embedding; "
                       "a label matching a built view replaces it, any other "
                       "label adds a source (repeatable)");
  pipeline->add_flag("--dump-views", pipeline_cfg.dump_views,
                     "Write normalized source views under <out>/views");
  bool no_cache = false;
  pipeline->add_flag("--no-cache", no_cache,
                     "Disable the on-disk basic-embedding cache");
  pipeline->add_option("--profile", profile,
                       "Named preset (cora, citeseer, ...) for h and deltas");
  pipeline->add_option("--seed", common.seed, "Master RNG seed")
      ->capture_default_str();
  pipeline->add_option("--jobs", common.jobs,
                       "Concurrent jobs (0 = hardware threads)")
      ->capture_default_str();

  SweepConfig sweep_cfg;
  int case_id = 1;
  std::string preset = "plain";
  std::string synth_out;
  auto* synth = app.add_subcommand(
      "synth", "Synthetic inconsistency benchmark sweep (CSV output)");
  synth->add_option("--case", case_id,
                    "Inconsistency case: 1 swap-attributes, 2 swap-topology, "
                    "3 attribute-noise, 4 topology-noise")
      ->required();
  synth->add_option("--sweep", sweep_cfg.sweep,
                    "Sweep values (comma list; default by case)")
      ->delimiter(',');
  synth->add_option("--trials", sweep_cfg.trials, "Trials per sweep value")
      ->capture_default_str();
  synth->add_option("--k", sweep_cfg.k, "Embedding dimensionality")
      ->capture_default_str();
  synth->add_option("--lambda-t", sweep_cfg.lambda_t, "SNMF regularizer, topology")
      ->capture_default_str();
  synth->add_option("--lambda-a", sweep_cfg.lambda_a, "SNMF regularizer, attributes")
      ->capture_default_str();
  synth->add_option("--delta-t", sweep_cfg.delta_t,
                    "delta_T (single value or per-sweep-point comma list)")
      ->delimiter(',');
  synth->add_option("--delta-a", sweep_cfg.delta_a,
                    "delta_A (single value or per-sweep-point comma list)")
      ->delimiter(',');
  synth->add_option("--delta-y", sweep_cfg.delta_y, "Regularizer on Y")
      ->capture_default_str();
  synth->add_option("--preset", preset,
                    "plain: constant deltas; prior: published delta schedule")
      ->capture_default_str();
  synth->add_option("--kmeans-runs", sweep_cfg.kmeans_runs,
                    "k-means repetitions per embedding")->capture_default_str();
  synth->add_option("--snmf-tol", sweep_cfg.snmf.tol,
                    "SNMF convergence threshold")->capture_default_str();
  synth->add_option("--snmf-max-iter", sweep_cfg.snmf.max_iter,
                    "SNMF iteration cap")->capture_default_str();
  add_fusion_flags(synth, sweep_cfg.fusion);
  synth->add_flag("--cross-cluster-pairs", sweep_cfg.cross_cluster_pairs_only,
                  "Restrict swap partners to different clusters");
  synth->add_option("--seed", sweep_cfg.seed, "Master RNG seed")
      ->capture_default_str();
  synth->add_option("--jobs", sweep_cfg.jobs,
                    "Concurrent trials (0 = hardware threads)")
      ->capture_default_str();
  synth->add_option("--out", synth_out, "Output CSV path")->required();

  std::string eval_embedding, eval_labels, eval_task = "cluster", eval_out;
  int eval_k = 0, eval_runs = 100;
  double eval_train_fraction = 0.1, eval_reg = 1.0;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval",
                                  "Evaluate an embedding file against labels");
  eval->add_option("--embedding", eval_embedding, "Embedding file")->required();
  eval->add_option("--labels", eval_labels, "Label file")->required();
  eval->add_option("--task", eval_task, "cluster or classify")
      ->capture_default_str();
  eval->add_option("--k", eval_k, "Cluster count (default: number of classes)");
  eval->add_option("--runs", eval_runs, "Repetitions")->capture_default_str();
  eval->add_option("--train-fraction", eval_train_fraction,
                   "Training fraction for classify")->capture_default_str();
  eval->add_option("--reg", eval_reg, "Classifier regularization strength")
      ->capture_default_str();
  eval->add_option("--seed", eval_seed, "Master RNG seed")->capture_default_str();
  eval->add_option("--out", eval_out, "Output CSV path")->required();

  int rw_h_max = 1;
  bool rw_community = false, rw_attributes = false;
  auto* reweight = app.add_subcommand(
      "reweight", "Write normalized source views for inspection");
  reweight->add_option("--edges", common.edges, "Edge list file")->required();
  reweight->add_option("--attrs", common.attrs, "Attribute pair file");
  reweight->add_option("--h-max", rw_h_max, "Highest proximity step h")
      ->capture_default_str();
  reweight->add_flag("--community", rw_community, "Include the community view");
  reweight->add_flag("--attributes", rw_attributes, "Include the attribute view");
  reweight->add_option("--out", common.out, "Output directory")->required();

  std::string eb_kind = "proximity", eb_init = "nndsvd";
  int eb_h = 1;
  SnmfConfig eb_cfg;
  auto* embed_basic = app.add_subcommand(
      "embed-basic", "Compute one source's basic embedding");
  embed_basic->add_option("--edges", common.edges, "Edge list file")->required();
  embed_basic->add_option("--attrs", common.attrs, "Attribute pair file");
  embed_basic->add_option("--kind", eb_kind,
                          "proximity, community or attributes")
      ->capture_default_str();
  embed_basic->add_option("--h-step", eb_h, "Proximity step for --kind proximity")
      ->capture_default_str();
  embed_basic->add_option("--k", eb_cfg.k, "Embedding dimensionality")
      ->capture_default_str();
  embed_basic->add_option("--lambda", eb_cfg.lambda, "SNMF regularizer")
      ->capture_default_str();
  embed_basic->add_option("--tol", eb_cfg.tol, "Convergence threshold")
      ->capture_default_str();
  embed_basic->add_option("--max-iter", eb_cfg.max_iter, "Iteration cap")
      ->capture_default_str();
  embed_basic->add_option("--init", eb_init, "nndsvd or random")
      ->capture_default_str();
  embed_basic->add_option("--seed", common.seed, "Seed for random init")
      ->capture_default_str();
  embed_basic->add_option("--out", common.out, "Output embedding file")
      ->required();

  std::vector<std::string> fuse_inputs;
  std::vector<double> fuse_deltas;
  FusionConfig fuse_cfg;
  std::uint64_t fuse_seed = 0;
  std::string fuse_out;
  auto* fuse = app.add_subcommand(
      "fuse", "Fuse basic-embedding files into a final embedding");
  fuse->add_option("--input", fuse_inputs,
                   "Basic-embedding file (repeatable; row-normalized on load)")
      ->required();
  fuse->add_option("--delta", fuse_deltas,
                   "Transition regularizer (one value total or one per input)")
      ->delimiter(',');
  fuse->add_option("--delta-y", fuse_cfg.delta_y, "Regularizer on Y")
      ->capture_default_str();
  add_fusion_flags(fuse, fuse_cfg);
  fuse->add_option("--seed", fuse_seed, "Master RNG seed")->capture_default_str();
  fuse->add_option("--out", fuse_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (pipeline->parsed()) {
      pipeline_cfg.use_cache = !no_cache;
      return run_pipeline_cmd(common, pipeline_cfg, profile, pipeline);
    }
    if (synth->parsed())
      return run_synth_cmd(sweep_cfg, case_id, preset, synth_out, synth);
    if (eval->parsed())
      return run_eval_cmd(eval_embedding, eval_labels, eval_task, eval_k,
                          eval_runs, eval_train_fraction, eval_reg, eval_seed,
                          eval_out);
    if (reweight->parsed())
      return run_reweight_cmd(common, rw_h_max, rw_community, rw_attributes);
    if (embed_basic->parsed())
      return run_embed_basic_cmd(common, eb_kind, eb_h, eb_cfg, eb_init);
    if (fuse->parsed())
      return run_fuse_cmd(fuse_inputs, fuse_deltas, fuse_cfg, fuse_seed, fuse_out);
  } catch (const param_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

} // namespace ahgr::cli
