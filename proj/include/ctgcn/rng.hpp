#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ctgcn {

// Deterministic sub-seed derivation: every randomized phase (init, walks,
// negative draws, splits) pulls its own stream from the one run-level seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

// mt19937_64 wrapper with hand-rolled draws. std::*_distribution output is
// implementation-defined, which would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double next_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound); unbiased via rejection. bound must be > 0.
  std::size_t next_index(std::size_t bound);

  // Standard normal via Box-Muller.
  double next_normal();

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_real(); }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[next_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ctgcn
