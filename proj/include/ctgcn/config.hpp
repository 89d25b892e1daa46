#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctgcn/centrality.hpp"
#include "ctgcn/evaluation.hpp"
#include "ctgcn/training.hpp"

namespace ctgcn {

// Resolved run configuration. Parsed from a flat `key = value` file with
// dotted section prefixes (dataset.*, model.*, train.*, eval.*, output.*);
// unknown keys are rejected up front.
struct RunConfig {
  std::filesystem::path config_path;

  // dataset.*
  std::filesystem::path dataset_manifest;            // dataset.manifest
  std::vector<std::filesystem::path> dataset_files;  // dataset.files (comma list)
  std::filesystem::path label_file;                  // dataset.labels

  // output.*
  std::filesystem::path output_dir;

  std::uint64_t seed = 0;

  TrainConfig train;

  // eval.*
  std::vector<std::string> eval_tasks;  // link_prediction, centrality, role_classification
  std::filesystem::path embeddings_dir;  // defaults to output_dir
  double eval_test_fraction = 0.3;
  int eval_max_positive_edges = 10000;
  double eval_ridge_lambda = 1.0;
  double eval_logistic_l2 = 1e-4;
  int eval_logistic_iterations = 5000;
  std::vector<CentralityKind> eval_centralities = {
      CentralityKind::Closeness, CentralityKind::Betweenness, CentralityKind::Eigenvector,
      CentralityKind::KCore};

  // The resolved snapshot written into the run manifest.
  std::map<std::string, std::string> resolved_entries() const;

  EvalConfig eval_config() const;
  DynamicGraph load_dataset() const;
};

RunConfig parse_run_config(const std::filesystem::path& path);

// CLI overrides applied after parsing.
void override_seed(RunConfig& cfg, std::uint64_t seed);
void override_output_dir(RunConfig& cfg, const std::filesystem::path& dir);

}  // namespace ctgcn
