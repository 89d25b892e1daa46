#pragma once

#include <stdexcept>
#include <string>

namespace ctgcn {

// Malformed input text (edge lists, configs, checkpoints). Carries file/line context.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates a documented precondition.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// NaN/Inf produced or consumed by a tensor operation; names the operation.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A training run that cannot proceed (nothing to optimize, NaN loss, ...).
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctgcn
