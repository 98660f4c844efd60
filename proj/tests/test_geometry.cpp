#include <cmath>
#include <numbers>

#include "anglelab/errors.hpp"
#include "anglelab/geometry.hpp"
#include "anglelab/random.hpp"
#include "doctest.h"
#include "regression_corpus.hpp"

using namespace anglelab;
using std::numbers::pi;

namespace {

PointCloud cloud_of(const std::vector<Point>& pts) {
  PointCloud c;
  c.dim = static_cast<int>(pts.front().size());
  for (const auto& p : pts) c.coords.insert(c.coords.end(), p.begin(), p.end());
  return c;
}

// Planar reference: for each pair, one loop over apexes with the angle from
// the 2-D cross and dot products.
double reference_max_angle_2d(const PointCloud& c) {
  double best = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double ax = c.point(i)[0] - c.point(k)[0], ay = c.point(i)[1] - c.point(k)[1];
        const double bx = c.point(j)[0] - c.point(k)[0], by = c.point(j)[1] - c.point(k)[1];
        best = std::max(best, std::atan2(std::abs(ax * by - ay * bx), ax * bx + ay * by));
      }
  return best;
}

void check_result_invariants(const PointCloud& c, const AngleScanResult& r) {
  CHECK(r.gap >= 0.0);
  CHECK(std::abs(r.phi + r.gap - pi) < 2e-15);
  CHECK(r.phi >= pi / 3 - 1e-15);
  CHECK(r.triple[0] < r.triple[1]);
  CHECK(std::abs(apex_angle(c.point(r.triple[0]), c.point(r.triple[2]), c.point(r.triple[1])) -
                 r.phi) < 1e-12);
}

}  // namespace

TEST_SUITE("apex angle") {
  TEST_CASE("examples") {
    CHECK(apex_angle(Point{0, 0}, Point{1, 0}, Point{2, 0}) == pi);
    CHECK(apex_gap(Point{0, 0}, Point{1, 0}, Point{2, 0}) == 0.0);
    CHECK(apex_angle(Point{0, 0}, Point{0, 1}, Point{1, 1}) == doctest::Approx(pi / 2).epsilon(1e-15));
    const double g = apex_gap(Point{0, 0}, Point{1, 1e-8}, Point{2, 0});
    CHECK(std::abs(g / 2e-8 - 1.0) < 1e-15);
  }

  TEST_CASE("coincident points") {
    CHECK_THROWS_AS(apex_angle(Point{0, 0}, Point{0, 0}, Point{1, 1}), DomainError);
    CHECK_THROWS_AS(apex_gap(Point{0, 0}, Point{1, 1}, Point{1, 1}), DomainError);
  }

  TEST_CASE("planted gaps in rotated 3-D frames") {
    RandomStream s(21);
    for (double gamma : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
      for (int rep = 0; rep < 20; ++rep) {
        // Isosceles apex at height tan(gamma/2) over the midpoint of a unit
        // half-chord, inside a random orthonormal frame (e, f).
        Point e(3), f(3), w(3);
        s.unit_vector(e);
        s.unit_vector(w);
        double ew = 0.0;
        for (int i = 0; i < 3; ++i) ew += e[i] * w[i];
        double nf = 0.0;
        for (int i = 0; i < 3; ++i) {
          f[i] = w[i] - ew * e[i];
          nf += f[i] * f[i];
        }
        for (double& v : f) v /= std::sqrt(nf);
        const double L = s.uniform(0.1, 10.0);
        const double h = L * std::tan(0.5 * gamma);
        Point c{s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1)}, x(3), y(3), z(3);
        for (int i = 0; i < 3; ++i) {
          x[i] = c[i] - L * e[i];
          y[i] = c[i] + L * e[i];
          z[i] = c[i] + h * f[i];
        }
        const double got = apex_gap(x, z, y);
        CHECK_MESSAGE(std::abs(got / gamma - 1.0) < 1e-3, "gamma = " << gamma);
      }
    }
  }
}

TEST_SUITE("max angle") {
  TEST_CASE("collinear points") {
    const auto c = cloud_of({{0, 0}, {1, 1}, {3, 3}});
    const auto r = max_angle_bruteforce(c);
    CHECK(r.phi == pi);
    CHECK(r.gap == 0.0);
    CHECK(r.triple == std::array<std::size_t, 3>{0, 2, 1});
    CHECK(r.evaluations == 3);
  }

  TEST_CASE("corners of the unit square") {
    const auto c = cloud_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const auto r = max_angle_bruteforce(c);
    CHECK(r.phi == doctest::Approx(pi / 2).epsilon(1e-15));
    // lexicographically first right angle: pair (0, 2) seen from 1
    CHECK(r.triple == std::array<std::size_t, 3>{0, 2, 1});
    CHECK(max_angle_pruned(c).phi == r.phi);
  }

  TEST_CASE("100 uniform points against a planar reference") {
    RandomStream s(22);
    const auto c = sample(*make_body(box_spec({1.0, 1.0})), s, 100);
    const auto r = max_angle_bruteforce(c);
    CHECK(std::abs(r.phi - reference_max_angle_2d(c)) < 1e-14);
    check_result_invariants(c, r);
  }

  TEST_CASE("duplicates and tiny inputs") {
    const auto c = cloud_of({{0, 0}, {1, 0}, {0.5, 0.5}, {1, 0}});
    try {
      max_angle_bruteforce(c);
      FAIL("expected a duplicate error");
    } catch (const DuplicatePointError& e) {
      CHECK(e.first() == 1);
      CHECK(e.second() == 3);
    }
    CHECK_THROWS_AS(max_angle_pruned(c), DuplicatePointError);
    CHECK_THROWS_AS(max_angle_bruteforce(cloud_of({{0, 0}, {1, 0}})), DomainError);
  }

  TEST_CASE("pruned equals exhaustive on the regression corpus") {
    int mismatches = 0;
    for (const auto& c : corpus::regression_clouds()) {
      const auto a = max_angle_bruteforce(c);
      const auto b = max_angle_pruned(c);
      mismatches += (a.phi != b.phi || a.gap != b.gap);
      check_result_invariants(c, b);
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("three points") {
    const auto c = cloud_of({{0, 0}, {2, 0.1}, {1, 0.3}});
    const auto a = max_angle_bruteforce(c);
    const auto b = max_angle_pruned(c);
    CHECK(a.phi == b.phi);
    CHECK(a.gap == b.gap);
    CHECK(a.triple == b.triple);
  }

  TEST_CASE("cluster plus outlier") {
    RandomStream s(23);
    auto c = sample(*make_body(ball_spec(2, 1e-6)), s, 999);
    c.coords.push_back(10.0);
    c.coords.push_back(-3.0);
    const auto a = max_angle_bruteforce(c);
    const auto b = max_angle_pruned(c);
    CHECK(a.phi == b.phi);
    CHECK(a.gap == b.gap);
    CHECK(b.evaluations < a.evaluations);
  }

  TEST_CASE("scale, rotation and translation invariance") {
    RandomStream s(24);
    const auto c = sample(*make_body(ball_spec(3)), s, 150);
    const auto r = max_angle_pruned(c);
    // rotation about e3 by 0.7, scale 13.5, shift
    const double co = std::cos(0.7), si = std::sin(0.7), k = 13.5;
    PointCloud t = c;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto p = c.point(i);
      auto q = t.point(i);
      q[0] = k * (co * p[0] - si * p[1]) + 4.0;
      q[1] = k * (si * p[0] + co * p[1]) - 2.0;
      q[2] = k * p[2] + 1.0;
    }
    const auto rt = max_angle_pruned(t);
    CHECK(std::abs(rt.phi - r.phi) < 1e-12);
    CHECK(std::abs(rt.gap - r.gap) < 1e-12);
  }
}

TEST_SUITE("lens") {
  TEST_CASE("membership") {
    const LensQuery q{{0, 0}, {2, 0}, 0.1};
    CHECK(lens_contains(q, Point{1, 0}));
    CHECK(lens_contains(LensQuery{{0, 0}, {2, 0}, 1e-9}, Point{1, 0}));
    CHECK_FALSE(lens_contains(q, Point{1, 2}));
    CHECK_FALSE(lens_contains(q, Point{0, 0}));
    CHECK_FALSE(lens_contains(q, Point{2, 0}));
    // outside the segment's span the angle is below pi/2
    CHECK_FALSE(lens_contains(q, Point{2.5, 0.0}));
  }

  TEST_CASE("the boundary arc is excluded") {
    // Inscribed angle pi - eps on the circle of radius csc(eps) through x, y.
    const double eps = 0.3;
    const double R = 1.0 / std::sin(eps);
    const double cy = -R * std::cos(eps);  // center below the chord
    const Point x{-1, 0}, y{1, 0};
    for (double u : {-0.6, 0.0, 0.5}) {
      const double ang = pi / 2 + u * eps;  // a point on the upper arc
      const Point z{R * std::cos(ang), cy + R * std::sin(ang)};
      const double g = apex_gap(x, z, y);
      CHECK(std::abs(g - eps) < 1e-12);
      // exactly on the computed boundary: not inside
      CHECK_FALSE(lens_contains(LensQuery{x, y, g}, z));
      CHECK(lens_contains(LensQuery{x, y, std::nextafter(g, 1.0)}, z));
    }
  }

  TEST_CASE("query validation") {
    CHECK_THROWS_AS(lens_contains(LensQuery{{0, 0}, {0, 0}, 0.1}, Point{1, 0}), DomainError);
    CHECK_THROWS_AS(lens_volume_exact(LensQuery{{0, 0}, {1, 0}, 0.0}), DomainError);
    CHECK_THROWS_AS(lens_volume_exact(LensQuery{{0, 0}, {1, 0}, pi / 2}), DomainError);
    CHECK_THROWS_AS(lens_volume_exact(LensQuery{{0}, {1}, 0.1}), DomainError);
    CHECK_THROWS_AS(lens_volume_exact(LensQuery{{0, 0}, {1, 0, 0}, 0.1}), DomainError);
  }

  TEST_CASE("planar volume equals two circular segments") {
    for (double eps : {0.01, 0.3, 1.0, 1.5}) {
      const double want = (2 * eps - std::sin(2 * eps)) / (std::sin(eps) * std::sin(eps));
      const double got = lens_volume_exact(LensQuery{{0, 0}, {2, 0}, eps});
      CHECK_MESSAGE(std::abs(got / want - 1.0) < 1e-9, "eps = " << eps);
    }
    // scaling by (ell/2)^2
    const double v2 = lens_volume_exact(LensQuery{{0, 0}, {2, 0}, 0.3});
    const double v5 = lens_volume_exact(LensQuery{{1, 1}, {4, 5}, 0.3});
    CHECK(v5 == doctest::Approx(v2 * 6.25).epsilon(1e-12));
  }

  TEST_CASE("3-D volume against hit counting") {
    const double eps = 0.05;
    const LensQuery q{{-1, 0, 0}, {1, 0, 0}, eps};
    const double h = std::tan(0.5 * eps);  // the lens sits in [-1,1] x [-h,h]^2
    RandomStream s(25);
    const std::uint64_t probes = 10'000'000;
    std::uint64_t hits = 0;
    Point z(3);
    for (std::uint64_t i = 0; i < probes; ++i) {
      z[0] = s.uniform(-1, 1);
      z[1] = s.uniform(-h, h);
      z[2] = s.uniform(-h, h);
      hits += lens_contains(q, z);
    }
    const double box = 2.0 * 4.0 * h * h;
    const double p = static_cast<double>(hits) / probes;
    const double est = box * p, se = box * std::sqrt(p * (1 - p) / probes);
    CHECK(std::abs(est - lens_volume_exact(q)) < 4 * se);
  }

  TEST_CASE("small-eps ratio to rho_d ell^d eps^(d-1)") {
    for (int d : {2, 3, 5}) {
      double prev = INFINITY;
      for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
        Point x(d, 0.0), y(d, 0.0);
        y[0] = 2.0;
        const LensQuery q{x, y, eps};
        const double dev = std::abs(lens_volume_exact(q) / lens_volume_leading(q) - 1.0);
        CHECK(dev < prev);
        prev = dev;
      }
      CHECK(prev < 1e-3);
    }
  }
}
