#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace anglelab {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed of substream `index` under `master`:
//   splitmix64(master ^ splitmix64(index))
// Pinned by a test vector; other implementations must reproduce it bit for bit.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept;

// Per-caller random source. mt19937_64 is fully specified by the standard and
// the variate transforms below are written out by hand, so a given seed yields
// the same sequence on every conforming platform. Never share one stream
// between threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal (Box-Muller, both variates used).
  double normal();
  // Standard exponential.
  double exponential();
  // Uniform direction on the unit sphere S^{d-1}.
  void unit_vector(std::span<double> out);

  RandomStream substream(std::uint64_t index) const {
    return RandomStream(substream_seed(seed_, index));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace anglelab
