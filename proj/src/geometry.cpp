#include "anglelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <tuple>
#include <vector>

#include "anglelab/errors.hpp"
#include "anglelab/quadrature.hpp"
#include "anglelab/specfun.hpp"

namespace anglelab {

namespace {

constexpr double kPi = std::numbers::pi;

struct ApexTerms {
  double s;  // |a| |rejection of b from a|
  double c;  // a . b
};

inline ApexTerms apex_terms(const double* x, const double* z, const double* y, int d) {
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (int k = 0; k < d; ++k) {
    const double a = x[k] - z[k];
    const double b = y[k] - z[k];
    aa += a * a;
    bb += b * b;
    ab += a * b;
  }
  if (aa == 0.0 || bb == 0.0) throw DomainError("apex_angle: apex coincides with an endpoint");
  const double t = ab / aa;
  double rr = 0.0;
  for (int k = 0; k < d; ++k) {
    const double r = (y[k] - z[k]) - t * (x[k] - z[k]);
    rr += r * r;
  }
  return {std::sqrt(rr) * std::sqrt(aa), ab};
}

inline double gap_at(const double* x, const double* z, const double* y, int d) {
  const auto t = apex_terms(x, z, y, d);
  return std::atan2(t.s, -t.c);
}

inline double angle_at(const double* x, const double* z, const double* y, int d) {
  const auto t = apex_terms(x, z, y, d);
  return std::atan2(t.s, t.c);
}

struct Best {
  double gap = std::numeric_limits<double>::infinity();
  std::array<std::size_t, 3> triple{};

  void offer(double g, std::size_t i, std::size_t j, std::size_t k) {
    if (g < gap || (g == gap && std::tie(i, j, k) < std::tie(triple[0], triple[1], triple[2]))) {
      gap = g;
      triple = {i, j, k};
    }
  }
};

AngleScanResult finish(const PointCloud& cloud, const Best& best, std::uint64_t evaluations) {
  AngleScanResult r;
  r.n = cloud.size();
  r.triple = best.triple;
  r.gap = best.gap;
  r.phi = angle_at(cloud.point(best.triple[0]).data(), cloud.point(best.triple[2]).data(),
                   cloud.point(best.triple[1]).data(), cloud.dim);
  r.evaluations = evaluations;
  return r;
}

void require_scan_input(const PointCloud& cloud) {
  if (cloud.size() < 3) throw DomainError("max_angle: need at least 3 points");
  require_distinct_points(cloud);
}

// Uniform grid over the bounding box, points bucketed in CSR form.
class PointGrid {
 public:
  explicit PointGrid(const PointCloud& cloud) : d_(cloud.dim) {
    const std::size_t n = cloud.size();
    lo_.assign(d_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d_, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = cloud.point(i);
      for (int k = 0; k < d_; ++k) {
        lo_[k] = std::min(lo_[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    per_axis_ = std::max<long>(
        1, static_cast<long>(std::floor(std::pow(static_cast<double>(n) / 2.0, 1.0 / d_))));
    cell_.resize(d_);
    min_cell_ = std::numeric_limits<double>::infinity();
    for (int k = 0; k < d_; ++k) {
      const double extent = std::max(hi[k] - lo_[k], 1e-300);
      cell_[k] = extent / static_cast<double>(per_axis_);
      min_cell_ = std::min(min_cell_, cell_[k]);
    }
    std::size_t cells = 1;
    for (int k = 0; k < d_; ++k) cells *= static_cast<std::size_t>(per_axis_);
    start_.assign(cells + 1, 0);
    std::vector<std::size_t> id(n);
    for (std::size_t i = 0; i < n; ++i) {
      id[i] = cell_of(cloud.point(i));
      ++start_[id[i] + 1];
    }
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    members_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) members_[fill[id[i]]++] = i;
    stamp_.assign(cells, 0);
  }

  double min_cell() const { return min_cell_; }

  // Calls visit(k) once for every point in a cell that meets the axis box
  // [p - r, p + r] for any of the given sample centers, within one epoch.
  template <class Visit>
  void visit_box(const double* p, double r, std::uint64_t epoch, Visit&& visit) {
    long lo_idx[16], hi_idx[16], cur[16];
    for (int k = 0; k < d_; ++k) {
      lo_idx[k] = index(k, p[k] - r);
      hi_idx[k] = index(k, p[k] + r);
      cur[k] = lo_idx[k];
    }
    for (;;) {
      std::size_t id = 0, mult = 1;
      for (int k = 0; k < d_; ++k) {
        id += static_cast<std::size_t>(cur[k]) * mult;
        mult *= static_cast<std::size_t>(per_axis_);
      }
      if (stamp_[id] != epoch) {
        stamp_[id] = epoch;
        for (std::size_t m = start_[id]; m < start_[id + 1]; ++m) visit(members_[m]);
      }
      int k = 0;
      while (k < d_ && ++cur[k] > hi_idx[k]) {
        cur[k] = lo_idx[k];
        ++k;
      }
      if (k == d_) return;
    }
  }

  static constexpr int kMaxDim = 16;

 private:
  long index(int k, double v) const {
    const double t = std::floor((v - lo_[k]) / cell_[k]);
    if (!(t > 0.0)) return 0;
    if (t >= static_cast<double>(per_axis_ - 1)) return per_axis_ - 1;
    return static_cast<long>(t);
  }
  std::size_t cell_of(std::span<const double> p) const {
    std::size_t id = 0, mult = 1;
    for (int k = 0; k < d_; ++k) {
      id += static_cast<std::size_t>(index(k, p[k])) * mult;
      mult *= static_cast<std::size_t>(per_axis_);
    }
    return id;
  }

  int d_;
  long per_axis_ = 1;
  std::vector<double> lo_, cell_;
  double min_cell_ = 1.0;
  std::vector<std::size_t> start_, members_;
  std::vector<std::uint64_t> stamp_;
};

}  // namespace

double apex_angle(std::span<const double> x, std::span<const double> z,
                  std::span<const double> y) {
  return angle_at(x.data(), z.data(), y.data(), static_cast<int>(z.size()));
}

double apex_gap(std::span<const double> x, std::span<const double> z,
                std::span<const double> y) {
  return gap_at(x.data(), z.data(), y.data(), static_cast<int>(z.size()));
}

void require_distinct_points(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    const auto pa = cloud.point(a), pb = cloud.point(b);
    if (std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end())) return true;
    if (std::lexicographical_compare(pb.begin(), pb.end(), pa.begin(), pa.end())) return false;
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const auto pa = cloud.point(order[m]), pb = cloud.point(order[m + 1]);
    if (std::equal(pa.begin(), pa.end(), pb.begin()))
      throw DuplicatePointError(order[m], order[m + 1]);
  }
}

AngleScanResult max_angle_bruteforce(const PointCloud& cloud) {
  require_scan_input(cloud);
  const std::size_t n = cloud.size();
  const int d = cloud.dim;
  const double* base = cloud.coords.data();
  Best best;
  std::uint64_t evals = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        best.offer(gap_at(base + i * d, base + k * d, base + j * d, d), i, j, k);
        ++evals;
      }
  return finish(cloud, best, evals);
}

AngleScanResult max_angle_pruned(const PointCloud& cloud) {
  require_scan_input(cloud);
  const std::size_t n = cloud.size();
  const int d = cloud.dim;
  if (n <= 8 || d > PointGrid::kMaxDim) return max_angle_bruteforce(cloud);
  const double* base = cloud.coords.data();
  Best best;
  std::uint64_t evals = 0;

  // Warm start on a prefix so the tube is already thin for the full pass.
  const std::size_t warm = std::min<std::size_t>(n, 16);
  for (std::size_t i = 0; i < warm; ++i)
    for (std::size_t j = i + 1; j < warm; ++j)
      for (std::size_t k = 0; k < warm; ++k) {
        if (k == i || k == j) continue;
        best.offer(gap_at(base + i * d, base + k * d, base + j * d, d), i, j, k);
        ++evals;
      }

  PointGrid grid(cloud);
  const double step = grid.min_cell();
  std::vector<double> e(d), sample(d);
  std::uint64_t epoch = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* pi = base + i * d;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* pj = base + j * d;
      double ell2 = 0.0;
      for (int k = 0; k < d; ++k) {
        e[k] = pj[k] - pi[k];
        ell2 += e[k] * e[k];
      }
      const double ell = std::sqrt(ell2);

      if (!(best.gap < 0.5 * kPi)) {
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          best.offer(gap_at(pi, base + k * d, pj, d), i, j, k);
          ++evals;
        }
        continue;
      }
      const double tube = 0.5 * ell * std::tan(0.5 * best.gap) * (1.0 + 1e-7) + 1e-13 * ell;
      const double tube2 = tube * tube;
      auto candidate = [&](std::size_t k) {
        if (k == i || k == j) return;
        const double* pk = base + k * d;
        double we = 0.0;
        for (int m = 0; m < d; ++m) we += (pk[m] - pi[m]) * e[m];
        const double t = we / ell2;
        if (!(t > 0.0 && t < 1.0)) return;
        double perp2 = 0.0;
        for (int m = 0; m < d; ++m) {
          const double r = (pk[m] - pi[m]) - t * e[m];
          perp2 += r * r;
        }
        if (perp2 > tube2) return;
        best.offer(gap_at(pi, pk, pj, d), i, j, k);
        ++evals;
      };
      ++epoch;
      const std::size_t segments = static_cast<std::size_t>(std::ceil(ell / step));
      const double reach = tube + 0.5 * step;
      for (std::size_t s = 0; s <= segments; ++s) {
        const double t = segments == 0 ? 0.0 : static_cast<double>(s) / segments;
        for (int k = 0; k < d; ++k) sample[k] = pi[k] + t * e[k];
        grid.visit_box(sample.data(), reach, epoch, candidate);
      }
    }
  }
  return finish(cloud, best, evals);
}

// ------------------------------------------------------------------ lens

double LensQuery::ell() const {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(s);
}

void LensQuery::validate() const {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("lens: x and y must share a dimension >= 2");
  if (!(ell() > 0.0)) throw DomainError("lens: x and y must be distinct");
  if (!(epsilon > 0.0 && epsilon < 0.5 * kPi))
    throw DomainError("lens: epsilon must lie in (0, pi/2)");
}

bool lens_contains(const LensQuery& q, std::span<const double> z) {
  q.validate();
  if (std::equal(z.begin(), z.end(), q.x.begin()) || std::equal(z.begin(), z.end(), q.y.begin()))
    return false;
  return apex_gap(q.x, z, q.y) < q.epsilon;
}

double lens_volume_exact(const LensQuery& q) {
  q.validate();
  const int d = static_cast<int>(q.x.size());
  const double eps = q.epsilon;
  const double csc2 = 1.0 / (std::sin(eps) * std::sin(eps));
  const double cot = std::cos(eps) / std::sin(eps);
  auto integrand = [&](double eta) {
    const double g = (1.0 - eta * eta) / (std::sqrt(csc2 - eta * eta) + cot);
    return std::pow(g, d - 1);
  };
  const auto res = integrate(integrand, 0.0, 1.0, {.rel_tol = 1e-12, .abs_tol = 0.0});
  const double half_ell = 0.5 * q.ell();
  return 2.0 * ball_volume(d - 1) * res.value * std::pow(half_ell, d);
}

double lens_volume_leading(const LensQuery& q) {
  q.validate();
  const int d = static_cast<int>(q.x.size());
  return std::exp(log_rho(d) + d * std::log(q.ell()) + (d - 1) * std::log(q.epsilon));
}

}  // namespace anglelab
