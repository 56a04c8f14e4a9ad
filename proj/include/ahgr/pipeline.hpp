#pragma once

#include "ahgr/evaluate.hpp"
#include "ahgr/fusion.hpp"
#include "ahgr/reweight.hpp"
#include "ahgr/snmf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ahgr {

/// End-to-end driver configuration: ingestion -> reweighting -> basic
/// embeddings -> fusion -> evaluation.
struct PipelineConfig {
  int h_max = 1;
  bool include_community = false;
  bool include_attributes = false;
  int k = 64;
  double lambda_t = 5.0, lambda_c = 1.0, lambda_a = 1.0;
  double delta_t = 1.0, delta_c = 1.0, delta_a = 1.0, delta_external = 1.0;
  std::vector<double> delta_t_steps;  // optional per-proximity-step override
  double delta_y = 1.0;
  double snmf_tol = 1e-6;
  int snmf_max_iter = 1000;
  double tol = 1e-6;
  int max_iter = 1000;
  int restarts = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  // "label=path" entries; a label matching a built view replaces that view's
  // basic embedding, any other label adds a new source.
  std::vector<std::string> external_embeddings;
  bool dump_views = false;
  bool use_cache = true;
  int eval_runs = 100;
  double train_fraction = 0.1;
  double reg_strength = 1.0;

  void validate() const;
};

/// Per-dataset presets reproducing the recommended settings (h and the delta
/// vector) for the bundled real-graph profiles.
struct Profile {
  int h = 1;
  double delta_t = 1, delta_c = 1, delta_a = 1;
  double delta_y = 1;
};

const Profile* find_profile(const std::string& name);
std::vector<std::string> profile_names();

struct PipelineOutcome {
  FusionResult fusion;
  std::vector<std::string> source_labels;
  std::optional<ClusteringReport> clustering;
  std::optional<ClassificationReport> classification;
  std::vector<std::string> written_files;
};

/// Runs the full pipeline and writes artifacts (basic embeddings, Y, U_l,
/// rho.csv, trace.csv and evaluation reports when labels are supplied) into
/// out_dir. On error all files written by this run are removed, except reusable
/// cache entries.
PipelineOutcome run_pipeline(const std::string& edges_path,
                             const std::string& attrs_path,
                             const std::string& labels_path,
                             const PipelineConfig& cfg,
                             const std::string& out_dir);

} // namespace ahgr
