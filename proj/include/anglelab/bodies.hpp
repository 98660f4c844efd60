#pragma once

// Convex bodies: membership, chords, uniform sampling, and Steiner
// symmetrization.
//
// Bodies are immutable once built and are shared through BodyPtr. Every body
// stores a center with ball(center, inner_radius_hint) inside it and
// ball(center, bounding_radius) containing it. Membership accepts points up to
// a signed slack of 1e-12 * bounding_radius past the boundary.
//
// Diameters are never normalized: the elongation is invariant under
// homotheties, so bodies keep their natural size.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anglelab/random.hpp"

namespace anglelab {

using Point = std::vector<double>;

enum class BodyKind { ball, box, simplex, ellipsoid, hpolytope, polygon, steiner };

std::string_view to_string(BodyKind kind);

// normal . x <= offset
struct Halfspace {
  Point normal;
  double offset = 0.0;
};

struct BodySpec {
  BodyKind kind = BodyKind::ball;
  int dim = 0;
  double radius = 1.0;               // ball
  std::vector<double> lengths;       // box edges, ellipsoid semi-axes
  std::vector<Halfspace> halfspaces; // hpolytope
  std::vector<Point> vertices;       // polygon, counterclockwise
  std::string source;                // file the halfspaces/vertices came from
  Point direction;                   // steiner: unit vector u
  std::shared_ptr<const BodySpec> base;  // steiner: body being symmetrized
};

// Canonical text form in the body-spec grammar (see parse_body_spec).
std::string to_string(const BodySpec& spec);

BodySpec ball_spec(int d, double radius = 1.0);
// Axis-parallel box [0, e_1] x ... x [0, e_d].
BodySpec box_spec(std::vector<double> edges);
// Standard simplex {x >= 0, sum x <= 1}.
BodySpec simplex_spec(int d);
// Origin-centered, axis-parallel semi-axes.
BodySpec ellipsoid_spec(std::vector<double> semi_axes);
BodySpec hpolytope_spec(std::vector<Halfspace> halfspaces);
BodySpec polygon_spec(std::vector<Point> vertices);
BodySpec steiner_spec(Point direction, BodySpec base);

// Section {alpha : y + alpha u in K} = [a, b] of a line with the body.
struct Chord {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

class ConvexBody {
 public:
  virtual ~ConvexBody() = default;

  const BodySpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return spec_.dim; }
  const Point& center() const noexcept { return center_; }
  double bounding_radius() const noexcept { return bounding_radius_; }
  double inner_radius_hint() const noexcept { return inner_radius_; }
  std::optional<double> volume() const noexcept { return volume_; }
  double boundary_tolerance() const noexcept { return 1e-12 * bounding_radius_; }

  virtual bool contains(std::span<const double> x) const = 0;

  // Chord of the line {y + alpha u}, u a unit vector; alpha is measured from
  // y. Closed form for analytic kinds; bracketing plus bisection to
  // 1e-10 * bounding_radius otherwise. An `inside_hint` alpha known to lie in
  // the body speeds up and robustifies the bracketing. Returns nullopt when
  // the line misses the body.
  std::optional<Chord> chord(std::span<const double> u, std::span<const double> y,
                             std::optional<double> inside_hint = std::nullopt) const {
    return do_chord(u, y, inside_hint);
  }

  virtual bool has_direct_sampler() const { return false; }
  // Exact uniform draw; only valid when has_direct_sampler().
  virtual void sample_direct(RandomStream& stream, std::span<double> out) const;

  // Closed-form E|P1 - P2|^2 for independent uniform points, when known.
  virtual std::optional<double> mean_squared_distance() const { return std::nullopt; }

 protected:
  ConvexBody(BodySpec spec, Point center, double bounding_radius, double inner_radius,
             std::optional<double> volume);

  virtual std::optional<Chord> do_chord(std::span<const double> u,
                                        std::span<const double> y,
                                        std::optional<double> inside_hint) const;
  // Generic membership-only chord search.
  std::optional<Chord> oracle_chord(std::span<const double> u, std::span<const double> y,
                                    std::optional<double> inside_hint) const;

 private:
  BodySpec spec_;
  Point center_;
  double bounding_radius_;
  double inner_radius_;
  std::optional<double> volume_;
};

using BodyPtr = std::shared_ptr<const ConvexBody>;

// Validates the spec (bounded, nonempty interior, strictly convex CCW polygon,
// unit Steiner direction) and builds the body. Throws ValidationError naming
// the violated condition.
BodyPtr make_body(const BodySpec& spec);

// Steiner symmetrization along unit u, about the hyperplane through the body
// center orthogonal to u. Polygons map to exact polygons; every other kind
// maps to a membership-composed body (exact up to chord tolerance).
BodyPtr steiner_symmetrize(const BodyPtr& body, std::span<const double> u);

// ---------------------------------------------------------------- sampling

struct PointCloud {
  int dim = 0;
  std::vector<double> coords;  // row-major, size() * dim
  std::string body;            // spec text of the source body
  std::uint64_t seed = 0;      // seed of the stream that produced it

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, static_cast<std::size_t>(dim)};
  }
  std::span<double> point(std::size_t i) {
    return {coords.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

struct SamplerOptions {
  bool allow_hit_and_run = true;
  // Proposals without a single acceptance before giving up.
  std::uint64_t starvation_limit = 10'000'000;
  // Rejection switches to hit-and-run below this measured acceptance rate.
  double min_acceptance = 1e-3;
};

// i.i.d. uniform points: closed-form samplers for analytic kinds, rejection
// from the bounding ball otherwise, with hit-and-run (burn-in 10 d^2, thinning
// d) once the measured acceptance drops below min_acceptance.
PointCloud sample(const ConvexBody& body, RandomStream& stream, std::size_t count,
                  const SamplerOptions& options = {});

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

// Hit-or-miss volume from uniform proposals in the bounding ball.
VolumeEstimate estimate_volume(const ConvexBody& body, RandomStream& stream,
                               std::uint64_t samples);

// ----------------------------------------------- iterated symmetrization

struct SymmetrizationRun {
  std::vector<BodyPtr> stages;     // stages[0] is the input
  std::vector<Point> directions;   // direction used to reach stages[k + 1]
  std::vector<double> discrepancy; // per stage, relative to the matched radius
  double matched_radius = 0.0;     // radius of the volume-matched ball
  bool converged = false;
};

// Max over `probes` random rays from the center of |boundary distance - r|.
double radial_discrepancy(const ConvexBody& body, double radius, RandomStream& stream,
                          std::size_t probes = 1000);

// Applies Steiner symmetrizations along random directions until the radial
// discrepancy from the volume-matched ball is below tolerance * radius or
// `iteration_cap` steps were taken.
SymmetrizationRun symmetrize_toward_ball(const BodyPtr& body, RandomStream& stream,
                                         std::size_t iteration_cap,
                                         double tolerance = 1e-2,
                                         std::size_t probes = 1000);

}  // namespace anglelab
