#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ctgcn/tensor.hpp"

namespace ctgcn {

struct NamedParam {
  std::string name;
  Tensor tensor;
};

// Text checkpoint, exact round trip via 17-significant-digit decimals:
//
//   ctgcn-checkpoint 1
//   <parameter count>
//   <name> <rows> <cols>
//   <cols values per line, rows lines>
//   ...
void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedParam>& params);

// Loads values into the given parameters in place. Names and shapes must
// match the file's manifest exactly; throws ParseError otherwise.
void load_checkpoint(const std::filesystem::path& path, const std::vector<NamedParam>& params);

}  // namespace ctgcn
