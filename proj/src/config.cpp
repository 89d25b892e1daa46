#include "ctgcn/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ctgcn/errors.hpp"

namespace ctgcn {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError("config key " + key + ": expected true/false, got `" + value + "`");
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("config key " + key + ": expected an integer, got `" + value + "`");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("config key " + key + ": expected a number, got `" + value + "`");
  }
}

Activation parse_activation(const std::string& key, const std::string& value) {
  if (value == "relu") return Activation::Relu;
  if (value == "tanh") return Activation::Tanh;
  if (value == "identity") return Activation::Identity;
  throw ParseError("config key " + key + ": expected relu|tanh|identity, got `" + value + "`");
}

CentralityKind parse_centrality(const std::string& key, const std::string& value) {
  if (value == "closeness") return CentralityKind::Closeness;
  if (value == "betweenness") return CentralityKind::Betweenness;
  if (value == "eigenvector") return CentralityKind::Eigenvector;
  if (value == "kcore") return CentralityKind::KCore;
  throw ParseError("config key " + key + ": unknown centrality `" + value + "`");
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative()) p = base / p;
  return p;
}

}  // namespace

RunConfig parse_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config: " + path.string());
  RunConfig cfg;
  cfg.config_path = path;
  const std::filesystem::path base = path.parent_path();

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected `key = value`");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": empty key or value");
    }

    if (key == "dataset.manifest") {
      cfg.dataset_manifest = resolve_path(base, value);
    } else if (key == "dataset.files") {
      for (const auto& f : split_list(value)) cfg.dataset_files.push_back(resolve_path(base, f));
    } else if (key == "dataset.labels") {
      cfg.label_file = resolve_path(base, value);
    } else if (key == "output.dir") {
      cfg.output_dir = resolve_path(base, value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    } else if (key == "model.variant") {
      const auto v = parse_variant(value);
      if (!v) throw ParseError("config key model.variant: unknown variant `" + value + "`");
      cfg.train.variant = *v;
    } else if (key == "model.embedding_dim") {
      cfg.train.embedding_dim = parse_long(key, value);
    } else if (key == "model.max_cores") {
      cfg.train.max_cores = static_cast<int>(parse_long(key, value));
    } else if (key == "model.activation") {
      cfg.train.activation = parse_activation(key, value);
    } else if (key == "model.recurrent") {
      if (value == "gru") cfg.train.recurrent = CellKind::Gru;
      else if (value == "lstm") cfg.train.recurrent = CellKind::Lstm;
      else throw ParseError("config key model.recurrent: expected gru|lstm, got `" + value + "`");
    } else if (key == "model.transform_layers") {
      cfg.train.transform_layers = static_cast<int>(parse_long(key, value));
    } else if (key == "model.cgcn_layers") {
      cfg.train.cgcn_layers = static_cast<int>(parse_long(key, value));
    } else if (key == "model.transform_nonlinear") {
      cfg.train.transform_nonlinear = parse_bool(key, value);
    } else if (key == "model.feature") {
      if (value == "one_hot") cfg.train.feature = FeatureKind::OneHot;
      else if (value == "degree_based") cfg.train.feature = FeatureKind::DegreeBased;
      else throw ParseError("config key model.feature: expected one_hot|degree_based, got `" +
                            value + "`");
    } else if (key == "model.row_normalize") {
      cfg.train.row_normalize = parse_bool(key, value);
    } else if (key == "train.epochs") {
      cfg.train.epochs = static_cast<int>(parse_long(key, value));
    } else if (key == "train.learning_rate") {
      cfg.train.learning_rate = parse_double(key, value);
    } else if (key == "train.weight_decay") {
      cfg.train.weight_decay = parse_double(key, value);
    } else if (key == "train.walk_length") {
      cfg.train.walk.walk_length = static_cast<int>(parse_long(key, value));
    } else if (key == "train.walks_per_node") {
      cfg.train.walk.walks_per_node = static_cast<int>(parse_long(key, value));
    } else if (key == "train.window") {
      cfg.train.walk.window = static_cast<int>(parse_long(key, value));
    } else if (key == "train.negative_q") {
      cfg.train.negative_q = static_cast<int>(parse_long(key, value));
    } else if (key == "train.negative_alpha") {
      cfg.train.negative_alpha = parse_double(key, value);
    } else if (key == "train.resample_walks_per_epoch") {
      cfg.train.resample_walks_per_epoch = parse_bool(key, value);
    } else if (key == "train.stop_gradient_h") {
      cfg.train.stop_gradient_on_h = parse_bool(key, value);
    } else if (key == "train.patience") {
      cfg.train.patience = static_cast<int>(parse_long(key, value));
    } else if (key == "eval.tasks") {
      cfg.eval_tasks = split_list(value);
    } else if (key == "eval.embeddings_dir") {
      cfg.embeddings_dir = resolve_path(base, value);
    } else if (key == "eval.test_fraction") {
      cfg.eval_test_fraction = parse_double(key, value);
    } else if (key == "eval.max_positive_edges") {
      cfg.eval_max_positive_edges = static_cast<int>(parse_long(key, value));
    } else if (key == "eval.ridge_lambda") {
      cfg.eval_ridge_lambda = parse_double(key, value);
    } else if (key == "eval.logistic_l2") {
      cfg.eval_logistic_l2 = parse_double(key, value);
    } else if (key == "eval.logistic_iterations") {
      cfg.eval_logistic_iterations = static_cast<int>(parse_long(key, value));
    } else if (key == "eval.centralities") {
      cfg.eval_centralities.clear();
      for (const auto& c : split_list(value)) {
        cfg.eval_centralities.push_back(parse_centrality(key, c));
      }
    } else {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unknown key `" + key +
                       "`");
    }
  }

  for (const auto& task : cfg.eval_tasks) {
    if (task != "link_prediction" && task != "centrality" && task != "role_classification") {
      throw ParseError("config key eval.tasks: unknown task `" + task + "`");
    }
  }
  if (!cfg.dataset_manifest.empty() && !cfg.dataset_files.empty()) {
    throw ParseError("config: give either dataset.manifest or dataset.files, not both");
  }
  cfg.train.seed = cfg.seed;
  if (cfg.eval_tasks.empty()) cfg.eval_tasks = {"link_prediction"};
  if (cfg.embeddings_dir.empty()) cfg.embeddings_dir = cfg.output_dir;
  cfg.train.validate();
  return cfg;
}

void override_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.train.seed = seed;
}

void override_output_dir(RunConfig& cfg, const std::filesystem::path& dir) {
  const bool embeddings_follow = cfg.embeddings_dir == cfg.output_dir;
  cfg.output_dir = dir;
  if (embeddings_follow) cfg.embeddings_dir = dir;
}

std::map<std::string, std::string> RunConfig::resolved_entries() const {
  std::map<std::string, std::string> m;
  auto fmt = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };
  m["dataset.manifest"] = dataset_manifest.string();
  {
    std::string files;
    for (const auto& f : dataset_files) {
      if (!files.empty()) files += ",";
      files += f.string();
    }
    m["dataset.files"] = files;
  }
  m["dataset.labels"] = label_file.string();
  m["output.dir"] = output_dir.string();
  m["seed"] = std::to_string(seed);
  m["model.variant"] = variant_name(train.variant);
  m["model.embedding_dim"] = std::to_string(train.embedding_dim);
  m["model.max_cores"] = std::to_string(train.max_cores);
  m["model.activation"] = train.activation == Activation::Relu
                              ? "relu"
                              : (train.activation == Activation::Tanh ? "tanh" : "identity");
  m["model.recurrent"] = train.recurrent == CellKind::Gru ? "gru" : "lstm";
  m["model.transform_layers"] = std::to_string(train.transform_layers);
  m["model.cgcn_layers"] = std::to_string(train.cgcn_layers);
  m["model.transform_nonlinear"] =
      train.transform_nonlinear ? (*train.transform_nonlinear ? "true" : "false") : "default";
  m["model.feature"] =
      train.feature_kind() == FeatureKind::OneHot ? "one_hot" : "degree_based";
  m["model.row_normalize"] = train.row_normalize ? "true" : "false";
  m["train.epochs"] = std::to_string(train.epochs);
  m["train.learning_rate"] = fmt(train.learning_rate);
  m["train.weight_decay"] = fmt(train.weight_decay);
  m["train.walk_length"] = std::to_string(train.walk.walk_length);
  m["train.walks_per_node"] = std::to_string(train.walk.walks_per_node);
  m["train.window"] = std::to_string(train.walk.window);
  m["train.negative_q"] = std::to_string(train.negative_q);
  m["train.negative_alpha"] = fmt(train.negative_alpha);
  m["train.resample_walks_per_epoch"] = train.resample_walks_per_epoch ? "true" : "false";
  m["train.stop_gradient_h"] = train.stop_gradient_on_h ? "true" : "false";
  m["train.patience"] = std::to_string(train.patience);
  {
    std::string tasks;
    for (const auto& t : eval_tasks) {
      if (!tasks.empty()) tasks += ",";
      tasks += t;
    }
    m["eval.tasks"] = tasks;
  }
  m["eval.embeddings_dir"] = embeddings_dir.string();
  m["eval.test_fraction"] = fmt(eval_test_fraction);
  m["eval.max_positive_edges"] = std::to_string(eval_max_positive_edges);
  m["eval.ridge_lambda"] = fmt(eval_ridge_lambda);
  m["eval.logistic_l2"] = fmt(eval_logistic_l2);
  m["eval.logistic_iterations"] = std::to_string(eval_logistic_iterations);
  {
    std::string kinds;
    for (const auto& k : eval_centralities) {
      if (!kinds.empty()) kinds += ",";
      kinds += centrality_name(k);
    }
    m["eval.centralities"] = kinds;
  }
  return m;
}

EvalConfig RunConfig::eval_config() const {
  EvalConfig ec;
  ec.seed = derive_seed(seed, "evaluation");
  ec.test_fraction = eval_test_fraction;
  ec.max_positive_edges = eval_max_positive_edges;
  ec.ridge_lambda = eval_ridge_lambda;
  ec.logistic.l2 = eval_logistic_l2;
  ec.logistic.max_iterations = eval_logistic_iterations;
  return ec;
}

DynamicGraph RunConfig::load_dataset() const {
  if (!dataset_manifest.empty()) return load_manifest(dataset_manifest);
  if (!dataset_files.empty()) return load_snapshots(dataset_files);
  throw ValidationError("config: dataset.manifest or dataset.files is required");
}

}  // namespace ctgcn
