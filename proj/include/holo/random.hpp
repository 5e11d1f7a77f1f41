#pragma once

#include <cstdint>

namespace holo {

// Seed mixing for independent substreams: every (seed, tag...) tuple maps to
// a decorrelated 64-bit state. Stable across platforms and runs.
std::uint64_t mix_seed(std::uint64_t h, std::uint64_t x);

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a) {
  return mix_seed(seed, a);
}
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

// Small counter-free generator (splitmix64 sequence). One instance per
// pixel-stream keeps simulation order-independent and reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform_pos();
  // Standard normal via the polar method.
  double normal();
  // Poisson with mean lambda >= 0; product method below 10, transformed
  // rejection (PTRS) above.
  std::uint64_t poisson(double lambda);

 private:
  std::uint64_t state_;
};

}  // namespace holo
