#pragma once

// Globally adaptive Gauss-Kronrod (7/15 point) quadrature with the QUADPACK
// error heuristic. Header-only so the integrand inlines.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <queue>
#include <span>
#include <utility>
#include <vector>

namespace anglelab {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the center.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> fv{};
  fv[7] = f(center);
  double kronrod = fv[7] * kKronrodWeights[7];
  double gauss = fv[7] * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    kronrod += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  const double value = kronrod * half;
  double error = std::abs((kronrod - gauss) * half);
  asc *= std::abs(half);
  if (asc != 0.0 && error != 0.0)
    error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  return {a, b, value, error};
}

}  // namespace detail

// Integrates f over consecutive breakpoints (at least two, increasing).
// Breakpoints let callers pin kinks or peaks to subinterval ends.
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {}) {
  QuadratureResult result;
  if (breakpoints.size() < 2) return result;
  std::priority_queue<detail::Segment> heap;
  double total = 0.0, total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    auto s = detail::gauss_kronrod15(f, breakpoints[i], breakpoints[i + 1]);
    result.evaluations += 15;
    total += s.value;
    total_error += s.error;
    heap.push(s);
  }
  auto done = [&] {
    return total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  };
  while (!done() && heap.size() < options.max_intervals) {
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at resolution limit
    heap.pop();
    const auto left = detail::gauss_kronrod15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod15(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the incremental updates.
  total = 0.0;
  total_error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_error += heap.top().error;
    heap.pop();
  }
  result.value = total;
  result.abs_error = total_error;
  result.converged =
      total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  return result;
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureOptions& options = {}) {
  const std::array<double, 2> ends{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(ends), options);
}

}  // namespace anglelab
