#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ctgcn/commands.hpp"
#include "ctgcn/version.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::int64_t seed = -1;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "run configuration file")->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--out", args.out, "override the output directory");
}

ctgcn::RunConfig resolve(const CommonArgs& args) {
  ctgcn::RunConfig cfg = ctgcn::parse_run_config(args.config);
  if (args.seed >= 0) ctgcn::override_seed(cfg, static_cast<std::uint64_t>(args.seed));
  if (!args.out.empty()) ctgcn::override_output_dir(cfg, args.out);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(ctgcn::kToolName) +
               " - k-core temporal graph convolutional embeddings"};
  app.set_version_flag("--version", ctgcn::kToolVersion);
  app.require_subcommand(1);

  CommonArgs decompose_args, train_args, eval_args, pipeline_args;
  add_common(app.add_subcommand("decompose", "core numbers and chain statistics"),
             decompose_args);
  add_common(app.add_subcommand("train", "train a model and export embeddings"), train_args);
  add_common(app.add_subcommand("eval", "evaluate exported embeddings"), eval_args);
  add_common(app.add_subcommand("pipeline", "train then evaluate in one run"), pipeline_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("decompose")) {
      ctgcn::cmd_decompose(resolve(decompose_args));
    } else if (app.got_subcommand("train")) {
      ctgcn::cmd_train(resolve(train_args));
    } else if (app.got_subcommand("eval")) {
      ctgcn::cmd_eval(resolve(eval_args));
    } else if (app.got_subcommand("pipeline")) {
      ctgcn::cmd_pipeline(resolve(pipeline_args));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
