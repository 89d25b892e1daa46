#include "ctgcn/rng.hpp"

#include <cmath>

namespace ctgcn {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
  return h;
}

// Final avalanche from splitmix64 so nearby seeds map to distant streams.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = fnv1a(kFnvOffset, &master, sizeof(master));
  h = fnv1a(h, tag.data(), tag.size());
  return mix(h);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) {
  std::uint64_t h = fnv1a(kFnvOffset, &master, sizeof(master));
  h = fnv1a(h, tag.data(), tag.size());
  h = fnv1a(h, &index, sizeof(index));
  return mix(h);
}

std::size_t Rng::next_index(std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

double Rng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1, u2;
  do {
    u1 = next_real();
  } while (u1 <= 1e-300);
  u2 = next_real();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace ctgcn
