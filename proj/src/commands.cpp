#include "ctgcn/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "ctgcn/checkpoint.hpp"
#include "ctgcn/core.hpp"
#include "ctgcn/errors.hpp"
#include "ctgcn/version.hpp"

namespace ctgcn {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct ManifestBuilder {
  json doc;

  ManifestBuilder(const RunConfig& cfg, const std::string& command) {
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["seed"] = cfg.seed;
    doc["config"] = json::object();
    for (const auto& [key, value] : cfg.resolved_entries()) doc["config"][key] = value;
    doc["timings"] = json::object();
    doc["outputs"] = json::array();
  }

  void timing(const std::string& phase, double seconds) { doc["timings"][phase] = seconds; }
  void output(const std::filesystem::path& path) { doc["outputs"].push_back(path.string()); }

  // Written to a temp file first so a present manifest is always complete.
  void write(const std::filesystem::path& dir) {
    const auto tmp = dir / "manifest.json.tmp";
    const auto final_path = dir / "manifest.json";
    {
      std::ofstream out(tmp);
      if (!out) throw std::runtime_error("cannot write manifest: " + tmp.string());
      out << doc.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, final_path);
  }
};

void require_output_dir(const RunConfig& cfg) {
  if (cfg.output_dir.empty()) throw ValidationError("config: output.dir is required");
  std::filesystem::create_directories(cfg.output_dir);
}

std::vector<std::filesystem::path> write_core_files(const RunConfig& cfg,
                                                    const DynamicGraph& dyn,
                                                    std::ostream& summary) {
  std::vector<std::filesystem::path> outputs;
  for (int t = 0; t < dyn.snapshot_count(); ++t) {
    const auto& snap = dyn.snapshots[static_cast<std::size_t>(t)];
    const CoreDecomposition d = core_numbers(snap);
    const auto path = cfg.output_dir / ("cores_t" + std::to_string(t) + ".tsv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "node\tcore\n";
    for (Index v = 0; v < snap.n; ++v) {
      out << dyn.node_labels[static_cast<std::size_t>(v)] << "\t"
          << d.core_number[static_cast<std::size_t>(v)] << "\n";
    }
    outputs.push_back(path);

    summary << "snapshot " << t << ": n=" << snap.n << " edges=" << snap.edge_count()
            << " k_max=" << d.k_max << "\n  core sizes:";
    for (int k = 0; k <= d.k_max; ++k) {
      const auto size = std::count_if(d.core_number.begin(), d.core_number.end(),
                                      [k](int c) { return c >= k; });
      summary << " " << size;
    }
    summary << "\n";
  }
  const CoreDecomposition du = core_numbers(union_graph(dyn));
  summary << "union graph: k_max=" << du.k_max << "\n";
  return outputs;
}

EvalReport run_eval_tasks(const RunConfig& cfg, const DynamicGraph& dyn,
                          const std::vector<Matrix>& embeddings) {
  const EvalConfig ec = cfg.eval_config();
  EvalReport report;
  for (const auto& task : cfg.eval_tasks) {
    if (task == "link_prediction") {
      report.append(link_prediction_eval(embeddings, dyn, ec));
    } else if (task == "centrality") {
      report.append(centrality_prediction_eval(embeddings, dyn, cfg.eval_centralities, ec));
    } else if (task == "role_classification") {
      if (cfg.label_file.empty()) {
        throw ValidationError("role_classification requires dataset.labels in the config");
      }
      const std::vector<int> labels = load_role_labels(cfg.label_file, dyn.node_labels);
      report.append(role_classification_eval(embeddings, labels, ec));
    }
  }
  return report;
}

std::vector<std::filesystem::path> write_eval_outputs(const RunConfig& cfg,
                                                      const EvalReport& report) {
  const auto tsv = cfg.output_dir / "report.tsv";
  write_report_tsv(tsv, report);
  const auto summary_path = cfg.output_dir / "report_summary.txt";
  {
    std::ofstream out(summary_path);
    write_report_summary(out, report);
  }
  write_report_summary(std::cout, report);
  return {tsv, summary_path};
}

std::vector<std::filesystem::path> run_training(const RunConfig& cfg, const DynamicGraph& dyn,
                                                ManifestBuilder& manifest) {
  TrainResult result = train(dyn, cfg.train);
  std::vector<std::filesystem::path> outputs;

  export_embeddings(result.embeddings, dyn.node_labels, cfg.output_dir);
  for (std::size_t t = 0; t < result.embeddings.per_snapshot.size(); ++t) {
    outputs.push_back(cfg.output_dir / ("embeddings_t" + std::to_string(t) + ".tsv"));
  }
  if (result.models.size() == 1) {
    const auto path = cfg.output_dir / "checkpoint.ckpt";
    save_checkpoint(path, result.models.front().named_parameters());
    outputs.push_back(path);
  } else {
    for (std::size_t t = 0; t < result.models.size(); ++t) {
      const auto path = cfg.output_dir / ("checkpoint_t" + std::to_string(t) + ".ckpt");
      save_checkpoint(path, result.models[t].named_parameters());
      outputs.push_back(path);
    }
  }
  const auto history_path = cfg.output_dir / "loss_history.tsv";
  {
    std::ofstream out(history_path);
    out << "epoch\tloss\n";
    char buf[40];
    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
      std::snprintf(buf, sizeof(buf), "%.17g", result.loss_history[e]);
      out << e << "\t" << buf << "\n";
    }
  }
  outputs.push_back(history_path);

  manifest.timing("decomposition_seconds", result.decomposition_seconds);
  manifest.timing("training_seconds", result.training_seconds);
  manifest.timing("per_epoch_seconds", result.per_epoch_seconds);
  manifest.doc["epochs_run"] = result.epochs_run;
  std::cout << "trained " << variant_name(cfg.train.variant) << " for " << result.epochs_run
            << " epochs";
  if (!result.loss_history.empty()) std::cout << ", final loss " << result.loss_history.back();
  std::cout << "\n";
  return outputs;
}

}  // namespace

void cmd_decompose(const RunConfig& cfg) {
  require_output_dir(cfg);
  ManifestBuilder manifest(cfg, "decompose");
  const auto load_start = Clock::now();
  const DynamicGraph dyn = cfg.load_dataset();
  manifest.timing("load_seconds", seconds_since(load_start));

  const auto decompose_start = Clock::now();
  std::ostringstream summary;
  auto outputs = write_core_files(cfg, dyn, summary);
  manifest.timing("decomposition_seconds", seconds_since(decompose_start));

  const auto summary_path = cfg.output_dir / "decompose_summary.txt";
  {
    std::ofstream out(summary_path);
    out << summary.str();
  }
  std::cout << summary.str();
  outputs.push_back(summary_path);
  for (const auto& p : outputs) manifest.output(p);
  manifest.write(cfg.output_dir);
}

void cmd_train(const RunConfig& cfg) {
  require_output_dir(cfg);
  ManifestBuilder manifest(cfg, "train");
  const auto load_start = Clock::now();
  const DynamicGraph dyn = cfg.load_dataset();
  manifest.timing("load_seconds", seconds_since(load_start));
  for (const auto& p : run_training(cfg, dyn, manifest)) manifest.output(p);
  manifest.write(cfg.output_dir);
}

void cmd_eval(const RunConfig& cfg) {
  require_output_dir(cfg);
  ManifestBuilder manifest(cfg, "eval");
  const auto load_start = Clock::now();
  const DynamicGraph dyn = cfg.load_dataset();
  manifest.timing("load_seconds", seconds_since(load_start));

  const std::vector<Matrix> embeddings =
      load_embeddings(cfg.embeddings_dir, dyn.snapshot_count(), dyn.node_labels);
  const auto eval_start = Clock::now();
  const EvalReport report = run_eval_tasks(cfg, dyn, embeddings);
  manifest.timing("evaluation_seconds", seconds_since(eval_start));
  for (const auto& p : write_eval_outputs(cfg, report)) manifest.output(p);
  manifest.write(cfg.output_dir);
}

void cmd_pipeline(const RunConfig& cfg) {
  require_output_dir(cfg);
  ManifestBuilder manifest(cfg, "pipeline");
  const auto load_start = Clock::now();
  const DynamicGraph dyn = cfg.load_dataset();
  manifest.timing("load_seconds", seconds_since(load_start));

  std::vector<std::filesystem::path> outputs = run_training(cfg, dyn, manifest);

  const std::vector<Matrix> embeddings =
      load_embeddings(cfg.output_dir, dyn.snapshot_count(), dyn.node_labels);
  const auto eval_start = Clock::now();
  const EvalReport report = run_eval_tasks(cfg, dyn, embeddings);
  manifest.timing("evaluation_seconds", seconds_since(eval_start));
  for (const auto& p : write_eval_outputs(cfg, report)) outputs.push_back(p);
  for (const auto& p : outputs) manifest.output(p);
  manifest.write(cfg.output_dir);
}

}  // namespace ctgcn
