#pragma once

// Internal constructors shared by bodies.cpp and steiner.cpp.

#include <span>

#include "anglelab/bodies.hpp"

namespace anglelab::detail {

// Membership-composed Steiner symmetrization of `base` along unit `u`.
BodyPtr make_steiner_composite(BodyPtr base, std::span<const double> u);

// Polygon from a validated counterclockwise, strictly convex vertex list.
BodyPtr make_polygon(BodySpec spec);

// Halfspace representation with unit normals.
struct HalfspaceSet {
  std::vector<Halfspace> faces;

  bool contains(std::span<const double> x, double tol) const;
  std::optional<Chord> chord(std::span<const double> u, std::span<const double> y) const;
};

}  // namespace anglelab::detail
