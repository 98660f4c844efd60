#include "anglelab/bodies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>

#include "anglelab/errors.hpp"
#include "anglelab/specfun.hpp"
#include "body_impl.hpp"
#include "lp.hpp"
#include "vecmath.hpp"

namespace anglelab {

using detail::dot;
using detail::norm;

// ------------------------------------------------------------------ specs

std::string_view to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::ball: return "ball";
    case BodyKind::box: return "box";
    case BodyKind::simplex: return "simplex";
    case BodyKind::ellipsoid: return "ellipsoid";
    case BodyKind::hpolytope: return "hpoly";
    case BodyKind::polygon: return "polygon";
    case BodyKind::steiner: return "steiner";
  }
  return "unknown";
}

namespace {

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace

std::string to_string(const BodySpec& spec) {
  const std::string d = "d=" + std::to_string(spec.dim);
  switch (spec.kind) {
    case BodyKind::ball: return "ball:" + d + ",r=" + format_number(spec.radius);
    case BodyKind::box: return "box:" + d + ",edges=" + join(spec.lengths);
    case BodyKind::simplex: return "simplex:" + d;
    case BodyKind::ellipsoid: return "ellipsoid:" + d + ",axes=" + join(spec.lengths);
    case BodyKind::hpolytope:
      if (!spec.source.empty()) return "hpoly:@" + spec.source;
      return "hpoly:<" + std::to_string(spec.halfspaces.size()) + " halfspaces>";
    case BodyKind::polygon:
      if (!spec.source.empty()) return "polygon:@" + spec.source;
      return "polygon:<" + std::to_string(spec.vertices.size()) + " vertices>";
    case BodyKind::steiner:
      return "steiner(u=" + join(spec.direction) + "|" +
             (spec.base ? to_string(*spec.base) : std::string("?")) + ")";
  }
  return "?";
}

BodySpec ball_spec(int d, double radius) {
  BodySpec s;
  s.kind = BodyKind::ball;
  s.dim = d;
  s.radius = radius;
  return s;
}

BodySpec box_spec(std::vector<double> edges) {
  BodySpec s;
  s.kind = BodyKind::box;
  s.dim = static_cast<int>(edges.size());
  s.lengths = std::move(edges);
  return s;
}

BodySpec simplex_spec(int d) {
  BodySpec s;
  s.kind = BodyKind::simplex;
  s.dim = d;
  return s;
}

BodySpec ellipsoid_spec(std::vector<double> semi_axes) {
  BodySpec s;
  s.kind = BodyKind::ellipsoid;
  s.dim = static_cast<int>(semi_axes.size());
  s.lengths = std::move(semi_axes);
  return s;
}

BodySpec hpolytope_spec(std::vector<Halfspace> halfspaces) {
  BodySpec s;
  s.kind = BodyKind::hpolytope;
  s.dim = halfspaces.empty() ? 0 : static_cast<int>(halfspaces.front().normal.size());
  s.halfspaces = std::move(halfspaces);
  return s;
}

BodySpec polygon_spec(std::vector<Point> vertices) {
  BodySpec s;
  s.kind = BodyKind::polygon;
  s.dim = 2;
  s.vertices = std::move(vertices);
  return s;
}

BodySpec steiner_spec(Point direction, BodySpec base) {
  BodySpec s;
  s.kind = BodyKind::steiner;
  s.dim = base.dim;
  s.direction = std::move(direction);
  s.base = std::make_shared<const BodySpec>(std::move(base));
  return s;
}

// ------------------------------------------------------------- base class

ConvexBody::ConvexBody(BodySpec spec, Point center, double bounding_radius,
                       double inner_radius, std::optional<double> volume)
    : spec_(std::move(spec)),
      center_(std::move(center)),
      bounding_radius_(bounding_radius),
      inner_radius_(inner_radius),
      volume_(volume) {}

void ConvexBody::sample_direct(RandomStream&, std::span<double>) const {
  throw SamplingError("body '" + to_string(spec_) + "' has no direct sampler");
}

std::optional<Chord> ConvexBody::do_chord(std::span<const double> u,
                                          std::span<const double> y,
                                          std::optional<double> inside_hint) const {
  return oracle_chord(u, y, inside_hint);
}

std::optional<Chord> ConvexBody::oracle_chord(std::span<const double> u,
                                              std::span<const double> y,
                                              std::optional<double> inside_hint) const {
  const std::size_t d = u.size();
  const double R = bounding_radius_;
  // Intersect the line with the bounding ball.
  Point offset(d);
  for (std::size_t i = 0; i < d; ++i) offset[i] = center_[i] - y[i];
  const double along = dot(offset, u);
  double perp2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double r = offset[i] - along * u[i];
    perp2 += r * r;
  }
  if (perp2 > R * R) return std::nullopt;
  const double half = std::sqrt(R * R - perp2) * (1.0 + 1e-9) + 1e-9 * R;
  const double lo = along - half;
  const double hi = along + half;

  Point probe(d);
  auto inside = [&](double alpha) {
    for (std::size_t i = 0; i < d; ++i) probe[i] = y[i] + alpha * u[i];
    return contains(probe);
  };

  std::optional<double> start;
  if (inside_hint && inside(*inside_hint)) start = inside_hint;
  if (!start && inside(along)) start = along;
  // Coarse-to-fine scan of the bounding segment.
  for (int level = 1; !start && level <= 12; ++level) {
    const double denom = std::ldexp(1.0, level);
    for (long j = 1; j < (1L << level); j += 2) {
      const double alpha = lo + (hi - lo) * (static_cast<double>(j) / denom);
      if (inside(alpha)) {
        start = alpha;
        break;
      }
    }
  }
  if (!start) return std::nullopt;

  const double tau = 1e-10 * R;
  double out_lo = lo, in_lo = *start;
  while (in_lo - out_lo > tau) {
    const double mid = 0.5 * (out_lo + in_lo);
    (inside(mid) ? in_lo : out_lo) = mid;
  }
  double in_hi = *start, out_hi = hi;
  while (out_hi - in_hi > tau) {
    const double mid = 0.5 * (in_hi + out_hi);
    (inside(mid) ? in_hi : out_hi) = mid;
  }
  return Chord{in_lo, in_hi};
}

// -------------------------------------------------------- halfspace sets

namespace detail {

bool HalfspaceSet::contains(std::span<const double> x, double tol) const {
  for (const auto& f : faces)
    if (dot(f.normal, x) > f.offset + tol) return false;
  return true;
}

std::optional<Chord> HalfspaceSet::chord(std::span<const double> u,
                                         std::span<const double> y) const {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& f : faces) {
    const double nu = dot(f.normal, u);
    const double slack = f.offset - dot(f.normal, y);
    if (std::abs(nu) < 1e-15) {
      if (slack < 0.0) return std::nullopt;
      continue;
    }
    const double t = slack / nu;
    if (nu > 0.0)
      hi = std::min(hi, t);
    else
      lo = std::max(lo, t);
  }
  if (!(lo <= hi)) return std::nullopt;
  return Chord{lo, hi};
}

}  // namespace detail

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::optional<Chord> solve_unit_quadratic(double half_b, double c) {
  // alpha^2 + 2 half_b alpha + c = 0
  const double disc = half_b * half_b - c;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  return Chord{-half_b - s, -half_b + s};
}

// ------------------------------------------------------------------ ball

class BallBody final : public ConvexBody {
 public:
  explicit BallBody(const BodySpec& spec)
      : ConvexBody(spec, Point(spec.dim, 0.0), spec.radius, spec.radius,
                   ball_volume(spec.dim, spec.radius)),
        limit2_(std::pow(spec.radius * (1.0 + 1e-12), 2)) {}

  bool contains(std::span<const double> x) const override {
    return dot(x, x) <= limit2_;
  }
  bool has_direct_sampler() const override { return true; }
  void sample_direct(RandomStream& stream, std::span<double> out) const override {
    stream.unit_vector(out);
    const double r = spec().radius * std::pow(stream.uniform(), 1.0 / dim());
    for (double& v : out) v *= r;
  }
  std::optional<double> mean_squared_distance() const override {
    const double d = dim(), r = spec().radius;
    return 2.0 * d * r * r / (d + 2.0);
  }

 protected:
  std::optional<Chord> do_chord(std::span<const double> u, std::span<const double> y,
                                std::optional<double>) const override {
    const double r = spec().radius;
    return solve_unit_quadratic(dot(u, y), dot(y, y) - r * r);
  }

 private:
  double limit2_;
};

// ------------------------------------------------------------------- box

Point half_of(const std::vector<double>& v) {
  Point c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = 0.5 * v[i];
  return c;
}

class BoxBody final : public ConvexBody {
 public:
  explicit BoxBody(const BodySpec& spec)
      : ConvexBody(spec, half_of(spec.lengths), 0.5 * norm(spec.lengths),
                   0.5 * *std::min_element(spec.lengths.begin(), spec.lengths.end()),
                   std::accumulate(spec.lengths.begin(), spec.lengths.end(), 1.0,
                                   std::multiplies<>())) {}

  bool contains(std::span<const double> x) const override {
    const double tol = boundary_tolerance();
    const auto& e = spec().lengths;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (x[i] < -tol || x[i] > e[i] + tol) return false;
    return true;
  }
  bool has_direct_sampler() const override { return true; }
  void sample_direct(RandomStream& stream, std::span<double> out) const override {
    const auto& e = spec().lengths;
    for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i] * stream.uniform();
  }
  std::optional<double> mean_squared_distance() const override {
    double s = 0.0;
    for (double e : spec().lengths) s += e * e / 6.0;
    return s;
  }

 protected:
  std::optional<Chord> do_chord(std::span<const double> u, std::span<const double> y,
                                std::optional<double>) const override {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    const auto& e = spec().lengths;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (std::abs(u[i]) < 1e-15) {
        if (y[i] < 0.0 || y[i] > e[i]) return std::nullopt;
        continue;
      }
      double t0 = (0.0 - y[i]) / u[i];
      double t1 = (e[i] - y[i]) / u[i];
      if (t0 > t1) std::swap(t0, t1);
      lo = std::max(lo, t0);
      hi = std::min(hi, t1);
    }
    if (!(lo <= hi)) return std::nullopt;
    return Chord{lo, hi};
  }
};

// --------------------------------------------------------------- simplex

detail::HalfspaceSet simplex_faces(int d) {
  detail::HalfspaceSet set;
  for (int i = 0; i < d; ++i) {
    Point n(d, 0.0);
    n[i] = -1.0;
    set.faces.push_back({n, 0.0});
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  set.faces.push_back({Point(d, s), s});
  return set;
}

double simplex_bounding_radius(int d) {
  const double c = 1.0 / (d + 1.0);
  // Farthest vertex from the centroid: every vertex is equidistant except the
  // origin; take the max of both.
  const double to_origin = std::sqrt(d * c * c);
  const double to_unit = std::sqrt((1.0 - c) * (1.0 - c) + (d - 1) * c * c);
  return std::max(to_origin, to_unit);
}

class SimplexBody final : public ConvexBody {
 public:
  explicit SimplexBody(const BodySpec& spec)
      : ConvexBody(spec, Point(spec.dim, 1.0 / (spec.dim + 1.0)),
                   simplex_bounding_radius(spec.dim),
                   1.0 / ((spec.dim + 1.0) * std::sqrt(static_cast<double>(spec.dim))),
                   std::exp(-log_gamma(spec.dim + 1.0))),
        faces_(simplex_faces(spec.dim)) {}

  bool contains(std::span<const double> x) const override {
    return faces_.contains(x, boundary_tolerance());
  }
  bool has_direct_sampler() const override { return true; }
  void sample_direct(RandomStream& stream, std::span<double> out) const override {
    // Normalized exponential spacings: (E_1..E_d)/(E_0+..+E_d) is uniform on
    // the standard simplex.
    double total = stream.exponential();
    for (double& v : out) {
      v = stream.exponential();
      total += v;
    }
    for (double& v : out) v /= total;
  }
  std::optional<double> mean_squared_distance() const override {
    const double d = dim();
    return 2.0 * d * d / ((d + 1.0) * (d + 1.0) * (d + 2.0));
  }

 protected:
  std::optional<Chord> do_chord(std::span<const double> u, std::span<const double> y,
                                std::optional<double>) const override {
    return faces_.chord(u, y);
  }

 private:
  detail::HalfspaceSet faces_;
};

// ------------------------------------------------------------- ellipsoid

class EllipsoidBody final : public ConvexBody {
 public:
  explicit EllipsoidBody(const BodySpec& spec)
      : ConvexBody(spec, Point(spec.dim, 0.0),
                   *std::max_element(spec.lengths.begin(), spec.lengths.end()),
                   *std::min_element(spec.lengths.begin(), spec.lengths.end()),
                   ball_volume(spec.dim) *
                       std::accumulate(spec.lengths.begin(), spec.lengths.end(), 1.0,
                                       std::multiplies<>())) {
    limit2_ = std::pow(1.0 + boundary_tolerance() / inner_radius_hint(), 2);
  }

  bool contains(std::span<const double> x) const override {
    const auto& a = spec().lengths;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (x[i] / a[i]) * (x[i] / a[i]);
    return s <= limit2_;
  }
  bool has_direct_sampler() const override { return true; }
  void sample_direct(RandomStream& stream, std::span<double> out) const override {
    stream.unit_vector(out);
    const double r = std::pow(stream.uniform(), 1.0 / dim());
    const auto& a = spec().lengths;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] *= r * a[i];
  }
  std::optional<double> mean_squared_distance() const override {
    double s = 0.0;
    for (double a : spec().lengths) s += a * a;
    return 2.0 * s / (dim() + 2.0);
  }

 protected:
  std::optional<Chord> do_chord(std::span<const double> u, std::span<const double> y,
                                std::optional<double>) const override {
    const auto& a = spec().lengths;
    double vv = 0.0, vw = 0.0, ww = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double v = u[i] / a[i], w = y[i] / a[i];
      vv += v * v;
      vw += v * w;
      ww += w * w;
    }
    const double disc = vw * vw - vv * (ww - 1.0);
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    return Chord{(-vw - s) / vv, (-vw + s) / vv};
  }

 private:
  double limit2_ = 1.0;
};

// ------------------------------------------------------------ hpolytope

struct PolytopeGeometry {
  detail::HalfspaceSet faces;
  Point center;
  double inner_radius = 0.0;
  double bounding_radius = 0.0;
};

PolytopeGeometry analyze_halfspaces(const std::vector<Halfspace>& input, int d) {
  PolytopeGeometry g;
  for (const auto& h : input) {
    require(static_cast<int>(h.normal.size()) == d,
            "hpoly: every normal must have dimension " + std::to_string(d));
    const double n = norm(h.normal);
    require(std::isfinite(n) && std::isfinite(h.offset), "hpoly: non-finite halfspace");
    if (n < 1e-300) {
      require(h.offset >= 0.0, "hpoly: halfspaces have empty intersection");
      continue;
    }
    Halfspace unit{h.normal, h.offset / n};
    for (double& v : unit.normal) v /= n;
    g.faces.faces.push_back(std::move(unit));
  }
  const std::size_t m = g.faces.faces.size();
  require(m >= static_cast<std::size_t>(d) + 1,
          "hpoly: halfspaces do not bound a region (need at least d+1)");

  // Free variables x = p - q with p, q >= 0.
  std::vector<std::vector<double>> A(m, std::vector<double>(2 * d + 1, 0.0));
  std::vector<double> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (int k = 0; k < d; ++k) {
      A[i][k] = g.faces.faces[i].normal[k];
      A[i][d + k] = -g.faces.faces[i].normal[k];
    }
    A[i][2 * d] = 1.0;  // Chebyshev radius column (unit normals)
    b[i] = g.faces.faces[i].offset;
  }

  std::vector<double> lo(d), hi(d);
  std::vector<std::vector<double>> A_box(m, std::vector<double>(2 * d));
  for (std::size_t i = 0; i < m; ++i)
    std::copy(A[i].begin(), A[i].begin() + 2 * d, A_box[i].begin());
  for (int k = 0; k < d; ++k) {
    for (int sign : {1, -1}) {
      std::vector<double> c(2 * d, 0.0);
      c[k] = sign;
      c[d + k] = -sign;
      const auto res = detail::solve_lp(A_box, b, c);
      require(res.status != detail::LpStatus::infeasible,
              "hpoly: halfspaces have empty intersection");
      require(res.status != detail::LpStatus::unbounded,
              "hpoly: halfspaces do not bound a region (unbounded along axis " +
                  std::to_string(k) + ")");
      (sign > 0 ? hi[k] : lo[k]) = sign * res.value;
    }
  }

  std::vector<double> c(2 * d + 1, 0.0);
  c[2 * d] = 1.0;
  const auto cheb = detail::solve_lp(A, b, c);
  require(cheb.status == detail::LpStatus::optimal,
          "hpoly: could not locate an interior point");
  double extent = 0.0;
  for (int k = 0; k < d; ++k) extent = std::max(extent, hi[k] - lo[k]);
  require(cheb.value > 1e-9 * extent, "hpoly: region has empty interior");

  g.center.resize(d);
  for (int k = 0; k < d; ++k) g.center[k] = cheb.x[k] - cheb.x[d + k];
  g.inner_radius = cheb.value;
  double r2 = 0.0;
  for (int k = 0; k < d; ++k) {
    const double far = std::max(hi[k] - g.center[k], g.center[k] - lo[k]);
    r2 += far * far;
  }
  g.bounding_radius = std::sqrt(r2);
  return g;
}

class HPolytopeBody final : public ConvexBody {
 public:
  HPolytopeBody(const BodySpec& spec, PolytopeGeometry g)
      : ConvexBody(spec, g.center, g.bounding_radius, g.inner_radius, std::nullopt),
        faces_(std::move(g.faces)) {}

  bool contains(std::span<const double> x) const override {
    return faces_.contains(x, boundary_tolerance());
  }

 protected:
  std::optional<Chord> do_chord(std::span<const double> u, std::span<const double> y,
                                std::optional<double>) const override {
    return faces_.chord(u, y);
  }

 private:
  detail::HalfspaceSet faces_;
};

// --------------------------------------------------------------- polygon

struct PolygonGeometry {
  detail::HalfspaceSet faces;
  Point centroid;
  double area = 0.0;
  double inner_radius = 0.0;
  double bounding_radius = 0.0;
  double mean_squared_distance = 0.0;
  std::vector<double> fan_cdf;  // cumulative triangle areas from vertex 0
};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

PolygonGeometry analyze_polygon(const std::vector<Point>& v) {
  const std::size_t k = v.size();
  require(k >= 3, "polygon: need at least 3 vertices");
  double scale = 0.0;
  for (const auto& p : v) {
    require(p.size() == 2, "polygon: vertices must be 2-D");
    require(std::isfinite(p[0]) && std::isfinite(p[1]), "polygon: non-finite vertex");
    scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
  }
  double turning = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % k];
    const Point& c = v[(i + 2) % k];
    const double e1x = b[0] - a[0], e1y = b[1] - a[1];
    const double e2x = c[0] - b[0], e2y = c[1] - b[1];
    const double cr = e1x * e2y - e1y * e2x;
    const double len = std::hypot(e1x, e1y) * std::hypot(e2x, e2y);
    require(len > 0.0, "polygon: repeated vertex");
    require(cr > 1e-14 * len,
            "polygon: vertices must be strictly convex and counterclockwise");
    turning += std::atan2(cr, e1x * e2x + e1y * e2y);
  }
  require(std::abs(turning - 2.0 * std::numbers::pi) < 1e-6,
          "polygon: vertex list winds more than once (not simple)");

  PolygonGeometry g;
  double sxx = 0.0, syy = 0.0, sx = 0.0, sy = 0.0;
  g.fan_cdf.push_back(0.0);
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const double a = 0.5 * cross(v[0], v[i], v[i + 1]);
    g.area += a;
    g.fan_cdf.push_back(g.area);
    // Second moments of a triangle: A/12 (sum p p^T + s s^T), s = sum p.
    const double tx = v[0][0] + v[i][0] + v[i + 1][0];
    const double ty = v[0][1] + v[i][1] + v[i + 1][1];
    double qx = tx * tx, qy = ty * ty;
    for (const Point* p : {&v[0], &v[i], &v[i + 1]}) {
      qx += (*p)[0] * (*p)[0];
      qy += (*p)[1] * (*p)[1];
    }
    sxx += a / 12.0 * qx;
    syy += a / 12.0 * qy;
    sx += a * tx / 3.0;
    sy += a * ty / 3.0;
  }
  g.centroid = {sx / g.area, sy / g.area};
  const double var = (sxx + syy) / g.area -
                     (g.centroid[0] * g.centroid[0] + g.centroid[1] * g.centroid[1]);
  g.mean_squared_distance = 2.0 * var;

  g.inner_radius = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % k];
    Point n{b[1] - a[1], a[0] - b[0]};  // outward for CCW order
    const double len = std::hypot(n[0], n[1]);
    n[0] /= len;
    n[1] /= len;
    const double off = n[0] * a[0] + n[1] * a[1];
    g.inner_radius = std::min(g.inner_radius, off - dot(n, g.centroid));
    g.faces.faces.push_back({n, off});
    g.bounding_radius = std::max(g.bounding_radius, detail::distance(a, g.centroid));
  }
  return g;
}

class PolygonBody final : public ConvexBody {
 public:
  PolygonBody(const BodySpec& spec, PolygonGeometry g)
      : ConvexBody(spec, g.centroid, g.bounding_radius, g.inner_radius, g.area),
        geometry_(std::move(g)) {}

  bool contains(std::span<const double> x) const override {
    return geometry_.faces.contains(x, boundary_tolerance());
  }
  bool has_direct_sampler() const override { return true; }
  void sample_direct(RandomStream& stream, std::span<double> out) const override {
    const auto& cdf = geometry_.fan_cdf;
    const double target = stream.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), target);
    if (it == cdf.end()) --it;
    const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    const auto& v = spec().vertices;
    const Point& a = v[0];
    const Point& b = v[i];
    const Point& c = v[i + 1];
    const double r1 = std::sqrt(stream.uniform());
    const double r2 = stream.uniform();
    for (int k = 0; k < 2; ++k)
      out[k] = (1.0 - r1) * a[k] + r1 * (1.0 - r2) * b[k] + r1 * r2 * c[k];
  }
  std::optional<double> mean_squared_distance() const override {
    return geometry_.mean_squared_distance;
  }

 protected:
  std::optional<Chord> do_chord(std::span<const double> u, std::span<const double> y,
                                std::optional<double>) const override {
    return geometry_.faces.chord(u, y);
  }

 private:
  PolygonGeometry geometry_;
};

// --------------------------------------------------------------- steiner

class SteinerBody final : public ConvexBody {
 public:
  SteinerBody(BodySpec spec, BodyPtr base, Point u)
      : ConvexBody(std::move(spec), base->center(), std::sqrt(2.0) * base->bounding_radius(),
                   base->inner_radius_hint(), std::nullopt),
        base_(std::move(base)),
        u_(std::move(u)),
        center_u_(dot(base_->center(), u_)) {}

  bool contains(std::span<const double> x) const override {
    const auto c = base_->chord(u_, x);
    if (!c) return false;
    return std::abs(dot(x, u_) - center_u_) <= 0.5 * c->length() + boundary_tolerance();
  }

 protected:
  std::optional<Chord> do_chord(std::span<const double> v, std::span<const double> y,
                                std::optional<double> hint) const override {
    const double cosine = dot(v, u_);
    if (std::abs(cosine) < 1.0 - 1e-12) return oracle_chord(v, y, hint);
    const auto c = base_->chord(u_, y);
    if (!c) return std::nullopt;
    const double mid = center_u_ - dot(y, u_);
    const double h = 0.5 * c->length();
    if (cosine > 0.0) return Chord{mid - h, mid + h};
    return Chord{-mid - h, -mid + h};
  }

 private:
  BodyPtr base_;
  Point u_;
  double center_u_;
};

}  // namespace

namespace detail {

BodyPtr make_steiner_composite(BodyPtr base, std::span<const double> u) {
  BodySpec spec;
  spec.kind = BodyKind::steiner;
  spec.dim = base->dim();
  spec.direction.assign(u.begin(), u.end());
  spec.base = std::make_shared<const BodySpec>(base->spec());
  Point dir(u.begin(), u.end());
  return std::make_shared<SteinerBody>(std::move(spec), std::move(base), std::move(dir));
}

BodyPtr make_polygon(BodySpec spec) {
  auto g = analyze_polygon(spec.vertices);
  return std::make_shared<PolygonBody>(spec, std::move(g));
}

}  // namespace detail

namespace {

void require_positive(const std::vector<double>& values, std::size_t count,
                      const std::string& what) {
  require(values.size() == count, what + ": expected " + std::to_string(count) +
                                      " values, got " + std::to_string(values.size()));
  for (double v : values)
    require(std::isfinite(v) && v > 0.0, what + " must be positive");
}

}  // namespace

BodyPtr make_body(const BodySpec& spec) {
  require(spec.dim >= 1, "d must be >= 1");
  switch (spec.kind) {
    case BodyKind::ball:
      require(std::isfinite(spec.radius) && spec.radius > 0.0, "ball radius must be positive");
      return std::make_shared<BallBody>(spec);
    case BodyKind::box:
      require_positive(spec.lengths, spec.dim, "box edges");
      return std::make_shared<BoxBody>(spec);
    case BodyKind::simplex:
      return std::make_shared<SimplexBody>(spec);
    case BodyKind::ellipsoid:
      require_positive(spec.lengths, spec.dim, "ellipsoid axes");
      return std::make_shared<EllipsoidBody>(spec);
    case BodyKind::hpolytope:
      return std::make_shared<HPolytopeBody>(spec, analyze_halfspaces(spec.halfspaces, spec.dim));
    case BodyKind::polygon:
      require(spec.dim == 2, "polygon must have d=2");
      return detail::make_polygon(spec);
    case BodyKind::steiner: {
      require(spec.base != nullptr, "steiner: missing base body");
      auto base = make_body(*spec.base);
      return steiner_symmetrize(base, spec.direction);
    }
  }
  throw ValidationError("unknown body kind");
}

}  // namespace anglelab
