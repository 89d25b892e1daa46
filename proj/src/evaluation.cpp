#include "ctgcn/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "ctgcn/errors.hpp"
#include "ctgcn/metrics.hpp"

namespace ctgcn {

namespace {

std::vector<std::pair<Index, Index>> unique_edges(const SnapshotGraph& g) {
  std::vector<std::pair<Index, Index>> edges;
  for (Index row = 0; row < g.adjacency.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(g.adjacency, row); it; ++it) {
      if (row < it.col()) edges.emplace_back(row, it.col());
    }
  }
  return edges;
}

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(static_cast<Index>(rows[i]));
  return out;
}

}  // namespace

LabeledEdgeSet build_labeled_edges(const SnapshotGraph& g, int max_positive, Rng& rng) {
  std::vector<std::pair<Index, Index>> edges = unique_edges(g);
  if (edges.empty()) throw ValidationError("labeled edge set: snapshot has no edges");
  rng.shuffle(edges);
  const std::size_t target = std::min<std::size_t>(edges.size(), static_cast<std::size_t>(
                                                                     std::max(1, max_positive)));
  edges.resize(target);

  std::set<std::pair<Index, Index>> taken;
  for (Index row = 0; row < g.adjacency.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(g.adjacency, row); it; ++it) {
      if (row < it.col()) taken.emplace(row, it.col());
    }
  }

  LabeledEdgeSet set;
  for (const auto& e : edges) {
    set.pairs.push_back(e);
    set.labels.push_back(1);
  }
  const std::size_t want_negatives = target;
  std::size_t attempts = 0;
  const std::size_t attempt_cap = 200 * want_negatives + 1000;
  std::size_t drawn = 0;
  while (drawn < want_negatives && attempts < attempt_cap) {
    ++attempts;
    Index u = static_cast<Index>(rng.next_index(static_cast<std::size_t>(g.n)));
    Index v = static_cast<Index>(rng.next_index(static_cast<std::size_t>(g.n)));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!taken.emplace(u, v).second) continue;  // an edge or already drawn
    set.pairs.emplace_back(u, v);
    set.labels.push_back(0);
    ++drawn;
  }
  if (drawn == 0) throw ValidationError("labeled edge set: could not sample any non-edge");
  return set;
}

Matrix hadamard_features(const Matrix& embeddings,
                         const std::vector<std::pair<Index, Index>>& pairs) {
  Matrix out(static_cast<Index>(pairs.size()), embeddings.cols());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [u, v] = pairs[p];
    if (u < 0 || v < 0 || u >= embeddings.rows() || v >= embeddings.rows()) {
      throw std::out_of_range("hadamard_features: pair index outside embedding rows");
    }
    out.row(static_cast<Index>(p)) =
        embeddings.row(u).cwiseProduct(embeddings.row(v));
  }
  return out;
}

Split split_indices(std::size_t count, double test_fraction, Rng& rng,
                    const std::vector<int>* stratify_labels) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0) {
    throw ValidationError("split: test fraction must lie in (0, 1)");
  }
  Split split;
  if (stratify_labels == nullptr) {
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    rng.shuffle(order);
    std::size_t test_count = static_cast<std::size_t>(test_fraction * static_cast<double>(count) + 0.5);
    if (count >= 2) test_count = std::clamp<std::size_t>(test_count, 1, count - 1);
    split.test.assign(order.begin(), order.begin() + static_cast<long>(test_count));
    split.train.assign(order.begin() + static_cast<long>(test_count), order.end());
    return split;
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < count; ++i) by_class[(*stratify_labels)[i]].push_back(i);
  for (auto& [cls, members] : by_class) {
    rng.shuffle(members);
    std::size_t test_count =
        static_cast<std::size_t>(test_fraction * static_cast<double>(members.size()) + 0.5);
    if (members.size() >= 2) test_count = std::clamp<std::size_t>(test_count, 1, members.size() - 1);
    else test_count = 0;  // singleton classes stay in train
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < test_count ? split.test : split.train).push_back(members[i]);
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

void EvalReport::append(const EvalReport& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

std::optional<double> EvalReport::find(const std::string& task, const std::string& kind, int t,
                                       const std::string& metric) const {
  for (const auto& r : records) {
    if (r.task == task && r.kind == kind && r.t == t && r.metric == metric) return r.value;
  }
  return std::nullopt;
}

EvalReport link_prediction_eval(const std::vector<Matrix>& embeddings, const DynamicGraph& dyn,
                                const EvalConfig& cfg) {
  if (dyn.snapshot_count() < 2) {
    throw ValidationError("link prediction needs at least two snapshots");
  }
  if (embeddings.size() != dyn.snapshots.size()) {
    throw ValidationError("link prediction: embeddings/snapshots misaligned");
  }
  EvalReport report;
  double sum = 0.0;
  int counted = 0;
  for (int t = 0; t + 1 < dyn.snapshot_count(); ++t) {
    const SnapshotGraph& next = dyn.snapshots[static_cast<std::size_t>(t + 1)];
    if (next.edge_count() == 0) {
      report.warnings.push_back("link_prediction: snapshot " + std::to_string(t + 1) +
                                " has no edges; transition skipped");
      continue;
    }
    Rng pair_rng(derive_seed(cfg.seed, "lp-pairs", static_cast<std::uint64_t>(t)));
    const LabeledEdgeSet set = build_labeled_edges(next, cfg.max_positive_edges, pair_rng);
    const Matrix features =
        hadamard_features(embeddings[static_cast<std::size_t>(t)], set.pairs);

    Rng split_rng(derive_seed(cfg.seed, "lp-split", static_cast<std::uint64_t>(t)));
    const Split split = split_indices(set.pairs.size(), cfg.test_fraction, split_rng, &set.labels);
    std::vector<int> train_labels, test_labels;
    for (std::size_t i : split.train) train_labels.push_back(set.labels[i]);
    for (std::size_t i : split.test) test_labels.push_back(set.labels[i]);
    const auto two_sided = [](const std::vector<int>& v) {
      bool pos = false, neg = false;
      for (int y : v) (y ? pos : neg) = true;
      return pos && neg;
    };
    if (!two_sided(train_labels) || !two_sided(test_labels)) {
      report.warnings.push_back("link_prediction: transition " + std::to_string(t) +
                                " lacks both classes after the split; skipped");
      continue;
    }
    const LinearClassifier clf =
        fit_logistic(select_rows(features, split.train), train_labels, cfg.logistic);
    const double auc =
        auc_score(clf.decision_values(select_rows(features, split.test)), test_labels);
    report.records.push_back({"link_prediction", "", t, "auc", auc});
    sum += auc;
    ++counted;
  }
  if (counted > 0) {
    report.records.push_back({"link_prediction", "", -1, "auc", sum / counted});
  } else {
    report.warnings.push_back("link_prediction: no transition could be evaluated");
  }
  return report;
}

EvalReport centrality_prediction_eval(const std::vector<Matrix>& embeddings,
                                      const DynamicGraph& dyn,
                                      const std::vector<CentralityKind>& kinds,
                                      const EvalConfig& cfg) {
  if (embeddings.size() != dyn.snapshots.size() || embeddings.empty()) {
    throw ValidationError("centrality prediction: embeddings/snapshots misaligned");
  }
  EvalReport report;
  for (CentralityKind kind : kinds) {
    const std::string name = centrality_name(kind);
    double sum = 0.0;
    int counted = 0;
    for (int t = 0; t < dyn.snapshot_count(); ++t) {
      std::vector<double> scores;
      try {
        scores = centrality(dyn.snapshots[static_cast<std::size_t>(t)], kind).scores;
      } catch (const ValidationError& e) {
        report.warnings.push_back("centrality_prediction: " + name + " at t=" +
                                  std::to_string(t) + " skipped: " + e.what());
        continue;
      }
      const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
      if (*hi_it - *lo_it <= 0.0) {
        report.warnings.push_back("centrality_prediction: " + name + " at t=" +
                                  std::to_string(t) + " is constant; skipped");
        continue;
      }
      Vector targets(static_cast<Index>(scores.size()));
      for (std::size_t i = 0; i < scores.size(); ++i) {
        targets(static_cast<Index>(i)) = (scores[i] - *lo_it) / (*hi_it - *lo_it);
      }
      Rng split_rng(derive_seed(cfg.seed, "centrality-split-" + name,
                                static_cast<std::uint64_t>(t)));
      const Split split =
          split_indices(scores.size(), cfg.test_fraction, split_rng, nullptr);
      const Matrix& emb = embeddings[static_cast<std::size_t>(t)];
      Vector train_targets(static_cast<Index>(split.train.size()));
      for (std::size_t i = 0; i < split.train.size(); ++i) {
        train_targets(static_cast<Index>(i)) = targets(static_cast<Index>(split.train[i]));
      }
      const RidgeRegressor reg =
          fit_ridge(select_rows(emb, split.train), train_targets, cfg.ridge_lambda);
      std::vector<double> predictions = reg.predict_all(select_rows(emb, split.test));
      std::vector<double> truth;
      truth.reserve(split.test.size());
      for (std::size_t i : split.test) truth.push_back(targets(static_cast<Index>(i)));
      const double mse = mse_score(predictions, truth);
      report.records.push_back({"centrality_prediction", name, t, "mse", mse});
      sum += mse;
      ++counted;
    }
    if (counted > 0) {
      report.records.push_back({"centrality_prediction", name, -1, "mse", sum / counted});
    }
  }
  return report;
}

EvalReport role_classification_eval(const std::vector<Matrix>& embeddings,
                                    const std::vector<int>& node_labels, const EvalConfig& cfg) {
  if (embeddings.empty()) throw ValidationError("role classification: no embeddings");
  EvalReport report;
  std::vector<std::size_t> labeled;
  for (std::size_t v = 0; v < node_labels.size(); ++v) {
    if (node_labels[v] >= 0) labeled.push_back(v);
  }
  const std::size_t missing = node_labels.size() - labeled.size();
  if (missing > 0) {
    report.warnings.push_back("role_classification: " + std::to_string(missing) +
                              " unlabeled nodes excluded");
  }
  std::set<int> classes;
  std::vector<int> labels;
  for (std::size_t v : labeled) {
    labels.push_back(node_labels[v]);
    classes.insert(node_labels[v]);
  }
  if (classes.size() < 2) {
    throw ValidationError("role classification needs at least two classes");
  }
  double sum = 0.0;
  int counted = 0;
  for (int t = 0; t < static_cast<int>(embeddings.size()); ++t) {
    const Matrix features = select_rows(embeddings[static_cast<std::size_t>(t)], labeled);
    Rng split_rng(derive_seed(cfg.seed, "role-split", static_cast<std::uint64_t>(t)));
    const Split split = split_indices(labels.size(), cfg.test_fraction, split_rng, &labels);
    std::vector<int> train_labels, test_labels;
    for (std::size_t i : split.train) train_labels.push_back(labels[i]);
    for (std::size_t i : split.test) test_labels.push_back(labels[i]);
    if (std::set<int>(train_labels.begin(), train_labels.end()).size() < 2 ||
        test_labels.empty()) {
      report.warnings.push_back("role_classification: t=" + std::to_string(t) +
                                " lacks class coverage after the split; skipped");
      continue;
    }
    const MulticlassClassifier clf =
        fit_logistic_multiclass(select_rows(features, split.train), train_labels, cfg.logistic);
    const double acc =
        accuracy_score(clf.predict_all(select_rows(features, split.test)), test_labels);
    report.records.push_back({"role_classification", "", t, "accuracy", acc});
    sum += acc;
    ++counted;
  }
  if (counted > 0) {
    report.records.push_back({"role_classification", "", -1, "accuracy", sum / counted});
  }
  return report;
}

std::vector<int> load_role_labels(const std::filesystem::path& path,
                                  const std::vector<std::int64_t>& universe_labels) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open label file: " + path.string());
  std::map<std::int64_t, int> by_label;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || line[first] == '#') continue;
    std::int64_t node = 0;
    int label = 0;
    if (std::sscanf(line.c_str(), "%lld %d", reinterpret_cast<long long*>(&node), &label) != 2) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected `node label`");
    }
    by_label[node] = label;
  }
  std::vector<int> labels(universe_labels.size(), -1);
  for (std::size_t v = 0; v < universe_labels.size(); ++v) {
    auto it = by_label.find(universe_labels[v]);
    if (it != by_label.end()) labels[v] = it->second;
  }
  return labels;
}

void write_report_tsv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path.string());
  out << "task\tkind\tt\tmetric\tvalue\n";
  char buf[40];
  for (const auto& r : report.records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.value);
    out << r.task << "\t" << (r.kind.empty() ? "-" : r.kind) << "\t";
    if (r.t < 0) {
      out << "all";
    } else {
      out << r.t;
    }
    out << "\t" << r.metric << "\t" << buf << "\n";
  }
}

void write_report_summary(std::ostream& out, const EvalReport& report) {
  for (const auto& r : report.records) {
    if (r.t != -1) continue;
    out << r.task;
    if (!r.kind.empty()) out << " [" << r.kind << "]";
    out << ": average " << r.metric << " = " << r.value << "\n";
  }
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
}

}  // namespace ctgcn
