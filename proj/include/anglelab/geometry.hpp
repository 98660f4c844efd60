#pragma once

// Triangle angles, the maximal angle among n points, and the lens of points
// that see a segment under a nearly straight angle.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "anglelab/bodies.hpp"

namespace anglelab {

// Angle at vertex z between the rays z->x and z->y, from atan2(s, c) with
// c = (x-z).(y-z) and s = |rejection of (y-z) from (x-z)| * |x-z|. The
// rejection form stays accurate when the angle is within 1e-8 of pi, where the
// Gram determinant |a|^2|b|^2 - (a.b)^2 cancels catastrophically.
// Throws DomainError when z coincides with x or y.
double apex_angle(std::span<const double> x, std::span<const double> z,
                  std::span<const double> y);

// pi - apex_angle, evaluated directly as atan2(s, -c).
double apex_gap(std::span<const double> x, std::span<const double> z,
                std::span<const double> y);

struct AngleScanResult {
  double phi = 0.0;  // maximal angle, in [pi/3, pi]
  double gap = 0.0;  // pi - phi without cancellation
  // {i, j, apex}: the maximal angle sits at P_apex and is subtended by P_i, P_j
  // with i < j.
  std::array<std::size_t, 3> triple{};
  std::size_t n = 0;
  std::uint64_t evaluations = 0;  // apex-angle evaluations performed
};

// Throws DuplicatePointError naming the first coincident pair found.
void require_distinct_points(const PointCloud& cloud);

// Exhaustive scan: apex_angle(P_i, P_k, P_j) for every pair i < j and every
// k outside it. The largest angle of a triangle is one of its three apex
// angles, so this covers every triangle. Ties go to the lexicographically
// smallest (i, j, apex).
AngleScanResult max_angle_bruteforce(const PointCloud& cloud);

// Same (phi, gap) as the exhaustive scan. With current best gap g, an apex
// beating it for pair {i, j} lies in the lens around segment P_iP_j, inside
// the tube of radius |P_iP_j| tan(g/2) / 2 whose projection falls strictly
// between the endpoints. Candidates come from a uniform grid walked along
// the segment; ties may resolve to a different attaining triple.
AngleScanResult max_angle_pruned(const PointCloud& cloud);

struct LensQuery {
  Point x;
  Point y;
  double epsilon = 0.0;  // in (0, pi/2)

  double ell() const;
  // Throws DomainError unless x != y share a dimension >= 2 and epsilon is in
  // (0, pi/2).
  void validate() const;
};

// z is in the open lens: angle x z y strictly greater than pi - epsilon.
// Points coinciding with x or y are outside.
bool lens_contains(const LensQuery& q, std::span<const double> z);

// Volume of the lens: 2 beta_{d-1} int_0^1 g(eta)^{d-1} d eta for |xy| = 2,
// with g(eta) = (1 - eta^2) / (sqrt(csc^2 eps - eta^2) + cot eps), rescaled by
// (ell/2)^d.
double lens_volume_exact(const LensQuery& q);

// Small-epsilon form rho_d ell^d eps^{d-1}.
double lens_volume_leading(const LensQuery& q);

}  // namespace anglelab
