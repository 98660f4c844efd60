#include <algorithm>
#include <cmath>

#include "anglelab/bodies.hpp"
#include "anglelab/errors.hpp"
#include "anglelab/specfun.hpp"
#include "body_impl.hpp"
#include "vecmath.hpp"

namespace anglelab {

namespace {

void require_unit(std::span<const double> u, int d) {
  if (static_cast<int>(u.size()) != d)
    throw ValidationError("steiner: direction has dimension " + std::to_string(u.size()) +
                          ", body has " + std::to_string(d));
  if (std::abs(detail::norm(u) - 1.0) > 1e-12)
    throw ValidationError("steiner: direction u must have unit norm");
}

// The chord half-length h(s) over the line s*v + alpha*u is concave and
// piecewise linear with breaks only at vertex abscissas, so sampling it at
// those abscissas gives the symmetral exactly.
BodyPtr symmetrize_polygon(const ConvexBody& body, std::span<const double> u) {
  const auto& verts = body.spec().vertices;
  const Point v{u[1], -u[0]};
  const double R = body.bounding_radius();
  const double merge = 1e-12 * R;

  std::vector<double> abscissas;
  abscissas.reserve(verts.size());
  for (const auto& p : verts) abscissas.push_back(detail::dot(p, v));
  std::sort(abscissas.begin(), abscissas.end());
  std::vector<double> unique;
  for (double s : abscissas)
    if (unique.empty() || s - unique.back() > merge) unique.push_back(s);

  const double center_u = detail::dot(body.center(), u);
  std::vector<double> half(unique.size(), 0.0);
  for (std::size_t i = 0; i < unique.size(); ++i) {
    const Point y{unique[i] * v[0], unique[i] * v[1]};
    if (const auto c = body.chord(u, y)) half[i] = std::max(0.0, 0.5 * c->length());
  }

  auto at = [&](double s, double alpha) {
    return Point{s * v[0] + alpha * u[0], s * v[1] + alpha * u[1]};
  };
  std::vector<Point> ring;
  for (std::size_t i = 0; i < unique.size(); ++i)
    ring.push_back(at(unique[i], center_u + half[i]));
  for (std::size_t i = unique.size(); i-- > 0;)
    if (half[i] > merge) ring.push_back(at(unique[i], center_u - half[i]));

  // Drop repeated and collinear vertices.
  bool changed = true;
  while (changed && ring.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < ring.size() && ring.size() > 3; ++i) {
      const Point& a = ring[(i + ring.size() - 1) % ring.size()];
      const Point& b = ring[i];
      const Point& c = ring[(i + 1) % ring.size()];
      const double e1x = b[0] - a[0], e1y = b[1] - a[1];
      const double e2x = c[0] - b[0], e2y = c[1] - b[1];
      const double l1 = std::hypot(e1x, e1y), l2 = std::hypot(e2x, e2y);
      const double cr = e1x * e2y - e1y * e2x;
      if (l1 <= merge || l2 <= merge || std::abs(cr) <= 1e-12 * l1 * l2) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  double area2 = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % ring.size()];
    area2 += a[0] * b[1] - a[1] * b[0];
  }
  if (area2 < 0.0) std::reverse(ring.begin(), ring.end());
  return detail::make_polygon(polygon_spec(std::move(ring)));
}

}  // namespace

BodyPtr steiner_symmetrize(const BodyPtr& body, std::span<const double> u) {
  require_unit(u, body->dim());
  if (body->spec().kind == BodyKind::polygon) return symmetrize_polygon(*body, u);
  return detail::make_steiner_composite(body, u);
}

double radial_discrepancy(const ConvexBody& body, double radius, RandomStream& stream,
                          std::size_t probes) {
  Point w(body.dim());
  double worst = 0.0;
  for (std::size_t p = 0; p < probes; ++p) {
    stream.unit_vector(w);
    const auto c = body.chord(w, body.center(), 0.0);
    const double reach = c ? c->b : 0.0;
    worst = std::max(worst, std::abs(reach - radius));
  }
  return worst;
}

SymmetrizationRun symmetrize_toward_ball(const BodyPtr& body, RandomStream& stream,
                                         std::size_t iteration_cap, double tolerance,
                                         std::size_t probes) {
  SymmetrizationRun run;
  const int d = body->dim();
  double vol = 0.0;
  if (auto v = body->volume())
    vol = *v;
  else
    vol = estimate_volume(*body, stream, 200'000).value;
  run.matched_radius = std::exp((std::log(vol) - log_ball_volume(d)) / d);

  run.stages.push_back(body);
  run.discrepancy.push_back(radial_discrepancy(*body, run.matched_radius, stream, probes) /
                            run.matched_radius);
  run.converged = run.discrepancy.back() < tolerance;
  Point u(d);
  while (!run.converged && run.directions.size() < iteration_cap) {
    stream.unit_vector(u);
    run.directions.push_back(u);
    run.stages.push_back(steiner_symmetrize(run.stages.back(), u));
    run.discrepancy.push_back(
        radial_discrepancy(*run.stages.back(), run.matched_radius, stream, probes) /
        run.matched_radius);
    run.converged = run.discrepancy.back() < tolerance;
  }
  return run;
}

}  // namespace anglelab
