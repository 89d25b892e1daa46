#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctgcn/centrality.hpp"
#include "ctgcn/graph.hpp"
#include "ctgcn/linear_models.hpp"
#include "ctgcn/rng.hpp"

namespace ctgcn {

struct EvalConfig {
  std::uint64_t seed = 0;
  double test_fraction = 0.3;
  int max_positive_edges = 10000;  // per-snapshot positive sample cap
  double ridge_lambda = 1.0;
  LogisticConfig logistic;
};

// Balanced positive/negative node pairs for one transition; negatives are
// verified absent from the snapshot's edge set and never duplicated.
struct LabeledEdgeSet {
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<int> labels;
};

LabeledEdgeSet build_labeled_edges(const SnapshotGraph& g, int max_positive, Rng& rng);

// Pairwise Hadamard features: row p = h_u . h_v entrywise.
Matrix hadamard_features(const Matrix& embeddings,
                         const std::vector<std::pair<Index, Index>>& pairs);

// Shuffled index split; when stratify_labels is given, each class splits
// separately so both sides keep the class mix.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
Split split_indices(std::size_t count, double test_fraction, Rng& rng,
                    const std::vector<int>* stratify_labels = nullptr);

// One metric row; t == -1 denotes the average over evaluated timestamps.
struct EvalRecord {
  std::string task;
  std::string kind;
  int t = 0;
  std::string metric;
  double value = 0.0;
};

struct EvalReport {
  std::vector<EvalRecord> records;
  std::vector<std::string> warnings;

  void append(const EvalReport& other);
  std::optional<double> find(const std::string& task, const std::string& kind, int t,
                             const std::string& metric) const;
};

// Link prediction (embeddings at t score the edges of t+1): Hadamard pair
// features, logistic regression on a 70/30 stratified split, test AUC per
// transition plus the average. Requires T >= 2.
EvalReport link_prediction_eval(const std::vector<Matrix>& embeddings, const DynamicGraph& dyn,
                                const EvalConfig& cfg);

// Ridge regression from embeddings to min-max-normalized centrality scores;
// test MSE per timestamp and kind plus per-kind averages.
EvalReport centrality_prediction_eval(const std::vector<Matrix>& embeddings,
                                      const DynamicGraph& dyn,
                                      const std::vector<CentralityKind>& kinds,
                                      const EvalConfig& cfg);

// One-vs-rest logistic regression to per-node labels (-1 = unlabeled, such
// nodes are excluded with a reported count); test accuracy per timestamp.
EvalReport role_classification_eval(const std::vector<Matrix>& embeddings,
                                    const std::vector<int>& node_labels, const EvalConfig& cfg);

// `node label` per line, node given as the raw universe label.
std::vector<int> load_role_labels(const std::filesystem::path& path,
                                  const std::vector<std::int64_t>& universe_labels);

// TSV rows `task kind t metric value` (t = "all" for averages).
void write_report_tsv(const std::filesystem::path& path, const EvalReport& report);
void write_report_summary(std::ostream& out, const EvalReport& report);

}  // namespace ctgcn
