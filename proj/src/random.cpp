#include "anglelab/random.hpp"

#include <cmath>
#include <numbers>

#include "anglelab/errors.hpp"

namespace anglelab {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double RandomStream::exponential() { return -std::log1p(-uniform()); }

void RandomStream::unit_vector(std::span<double> out) {
  for (;;) {
    double norm2 = 0.0;
    for (double& v : out) {
      v = normal();
      norm2 += v * v;
    }
    if (norm2 > 1e-300) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& v : out) v *= inv;
      return;
    }
  }
}

}  // namespace anglelab
