#pragma once

namespace ctgcn {

inline constexpr const char* kToolName = "ctgcn";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ctgcn
