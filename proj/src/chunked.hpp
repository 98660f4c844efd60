#pragma once

// Fixed-size work chunks, each with its own substream, run on a worker pool
// and returned in chunk order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "anglelab/parallel.hpp"
#include "anglelab/random.hpp"

namespace anglelab::detail {

// fn(RandomStream& stream, std::uint64_t count) -> R, called once per chunk.
template <class R, class Fn>
std::vector<R> run_chunks(std::uint64_t total, std::uint64_t per_chunk, std::uint64_t master,
                          unsigned workers, Fn&& fn) {
  const std::uint64_t chunks = (total + per_chunk - 1) / per_chunk;
  std::vector<R> out(chunks);
  parallel_for(chunks, resolve_workers(workers), [&](std::size_t c) {
    RandomStream stream(substream_seed(master, c));
    const std::uint64_t begin = c * per_chunk;
    const std::uint64_t count = std::min(per_chunk, total - begin);
    out[c] = fn(stream, count);
  });
  return out;
}

// Running sum and sum of squares of exp(x - shift), in long double.
struct ShiftedMoments {
  bool log_mode = false;
  double shift = 0.0;
  long double s1 = 0.0L, s2 = 0.0L;
  std::uint64_t n = 0;

  void add_linear(double v) {
    s1 += v;
    s2 += static_cast<long double>(v) * v;
    ++n;
  }
  void add_log(double x) {
    if (n == 0 || x > shift) rebase(x);
    const long double e = std::exp(static_cast<long double>(x - shift));
    s1 += e;
    s2 += e * e;
    ++n;
  }
  void merge(const ShiftedMoments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    if (log_mode) {
      ShiftedMoments b = o;
      if (b.shift > shift) rebase(b.shift);
      b.rebase(shift);
      s1 += b.s1;
      s2 += b.s2;
    } else {
      s1 += o.s1;
      s2 += o.s2;
    }
    n += o.n;
  }
  // Moves the shift to `to` (>= current shift in use).
  void rebase(double to) {
    if (n > 0) {
      const long double f = std::exp(static_cast<long double>(shift - to));
      s1 *= f;
      s2 *= f * f;
    }
    shift = to;
  }
  double log_mean() const { return shift + static_cast<double>(std::log(s1 / n)); }
  // Standard error of the mean, as a log; -inf when it vanishes.
  double log_std_error() const {
    if (n < 2) return -std::numeric_limits<double>::infinity();
    const long double mean = s1 / n;
    long double var = (s2 - s1 * mean) / (n - 1);
    if (!(var > 0.0L)) return -std::numeric_limits<double>::infinity();
    return shift + static_cast<double>(0.5L * std::log(var / n));
  }
};

}  // namespace anglelab::detail
