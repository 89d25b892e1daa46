#pragma once

#include "ctgcn/config.hpp"

namespace ctgcn {

// CLI entry points. Each writes its outputs under cfg.output_dir and finishes
// with an atomically renamed run manifest; errors propagate as exceptions for
// the driver to turn into a nonzero exit status.
void cmd_decompose(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_eval(const RunConfig& cfg);
void cmd_pipeline(const RunConfig& cfg);

}  // namespace ctgcn
