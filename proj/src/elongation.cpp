#include "anglelab/elongation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "anglelab/errors.hpp"
#include "anglelab/quadrature.hpp"
#include "anglelab/specfun.hpp"
#include "chunked.hpp"
#include "vecmath.hpp"

namespace anglelab {

namespace {

constexpr double kPi = std::numbers::pi;

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

ElongationEstimate from_moments(const detail::ShiftedMoments& m, EstimateMethod method) {
  ElongationEstimate e;
  e.method = method;
  e.log_value = m.log_mean();
  e.value = std::exp(e.log_value);
  e.std_error = std::exp(m.log_std_error());
  e.samples = m.n;
  return e;
}

// log int_0^1 s^{d-1} (1 + s^2 + 2 s c)^{d/2} ds, c = cos(theta) = -t.
double log_radial(int d, double c) {
  const double dd = d;
  // The integrand never exceeds max(1, (2 + 2c)^{d/2}).
  const double shift = 0.5 * dd * std::max(0.0, std::log(2.0 + 2.0 * c));
  auto f = [&](double s) {
    const double q = 1.0 + s * s + 2.0 * s * c;
    return std::exp((dd - 1.0) * std::log(s) + 0.5 * dd * std::log(q) - shift);
  };
  std::vector<double> breaks{0.0};
  for (double k : {64.0, 16.0, 4.0, 1.0})
    if (1.0 - k / dd > breaks.back()) breaks.push_back(1.0 - k / dd);
  breaks.push_back(1.0);
  const auto r = integrate(f, std::span<const double>(breaks),
                           {.rel_tol = 1e-12, .abs_tol = 0.0, .max_intervals = 2000});
  return shift + std::log(r.value);
}

// log int_lo^hi Psi_d(-cos th) sin^{d-2}(th) d th, th in [0, pi].
double log_angular_piece(int d, double lo, double hi) {
  const double dd = d;
  auto log_sin_term = [&](double th) {
    return d == 2 ? 0.0 : (dd - 2.0) * std::log(std::sin(th));
  };
  double shift = -std::numeric_limits<double>::infinity();
  constexpr int kGrid = 512;
  for (int i = 1; i < kGrid; ++i) {
    const double th = lo + (hi - lo) * i / kGrid;
    const double bound =
        log_sin_term(th) + 0.5 * dd * std::max(0.0, std::log(2.0 + 2.0 * std::cos(th)));
    shift = std::max(shift, bound);
  }
  auto f = [&](double th) { return std::exp(log_sin_term(th) + log_radial(d, std::cos(th)) - shift); };

  // The mass concentrates around t = -1/3, i.e. cos th = 1/3, with width ~ 1/sqrt(d).
  const double th_star = std::acos(1.0 / 3.0);
  const double w = 1.0 / std::sqrt(dd);
  std::vector<double> breaks{lo, hi};
  for (double k : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0}) {
    const double b = th_star + k * w;
    if (b > lo && b < hi) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  const auto r = integrate(f, std::span<const double>(breaks),
                           {.rel_tol = 1e-10, .abs_tol = 0.0, .max_intervals = 2000});
  return std::log(2.0 / (3.0 * dd)) + shift + std::log(r.value);
}

void require_ball_range(int d) {
  if (d < 2 || d > 500)
    throw DomainError("ball quadrature: d must be in [2, 500], got " + std::to_string(d));
}

bool has_analytic(const ConvexBody& body) {
  return body.dim() == 2 && body.mean_squared_distance() && body.volume();
}

}  // namespace

std::string_view to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::analytic: return "analytic";
    case EstimateMethod::quadrature: return "quadrature";
    case EstimateMethod::monte_carlo: return "monte-carlo";
  }
  return "?";
}

EstimateMethod parse_method(std::string_view text) {
  if (text == "analytic") return EstimateMethod::analytic;
  if (text == "quadrature") return EstimateMethod::quadrature;
  if (text == "monte-carlo" || text == "mc") return EstimateMethod::monte_carlo;
  throw ValidationError("unknown method '" + std::string(text) +
                        "' (expected analytic, quadrature or monte-carlo)");
}

ElongationEstimate mean_dist_power_mc(const ConvexBody& body, int power, std::uint64_t samples,
                                      RandomStream& stream, unsigned workers) {
  if (power < 1) throw ValidationError("power must be >= 1");
  if (samples < 1000) throw ValidationError("samples must be >= 1000");
  const bool log_mode = power > 50;
  const double half_power = 0.5 * power;
  const std::uint64_t master = stream.next_u64();
  const auto parts = detail::run_chunks<detail::ShiftedMoments>(
      samples, kPairsPerChunk, master, workers, [&](RandomStream& s, std::uint64_t m) {
        detail::ShiftedMoments acc;
        acc.log_mode = log_mode;
        const PointCloud cloud = sample(body, s, 2 * m);
        const int d = cloud.dim;
        for (std::uint64_t k = 0; k < m; ++k) {
          const double* p = cloud.coords.data() + k * d;
          const double* q = cloud.coords.data() + (k + m) * d;
          double r2 = 0.0;
          for (int i = 0; i < d; ++i) r2 += (p[i] - q[i]) * (p[i] - q[i]);
          if (log_mode)
            acc.add_log(half_power * std::log(r2));
          else
            acc.add_linear(std::pow(r2, half_power));
        }
        return acc;
      });
  detail::ShiftedMoments total;
  total.log_mode = log_mode;
  for (const auto& p : parts) total.merge(p);
  return from_moments(total, EstimateMethod::monte_carlo);
}

BallMomentPieces ball_moment_pieces(int d) {
  require_ball_range(d);
  BallMomentPieces p;
  p.d = d;
  p.log_C_d = log_cosine_density_constant(d);
  p.log_J1 = log_angular_piece(d, 0.0, 0.5 * kPi);
  p.log_J2 = log_angular_piece(d, 0.5 * kPi, kPi);
  p.log_E = p.log_C_d + 2.0 * std::log(static_cast<double>(d)) + log_add(p.log_J1, p.log_J2);
  return p;
}

ElongationEstimate mean_dist_power_ball_quadrature(int d) {
  const auto p = ball_moment_pieces(d);
  ElongationEstimate e;
  e.method = EstimateMethod::quadrature;
  e.log_value = p.log_E;
  e.value = std::exp(p.log_E);
  return e;
}

ElongationEstimate ball_elongation(int d) {
  const auto E = mean_dist_power_ball_quadrature(d);
  ElongationEstimate e;
  e.method = EstimateMethod::quadrature;
  e.log_value = std::log(3.0) + log_rho(d) + E.log_value - log_ball_volume(d);
  e.value = std::exp(e.log_value);
  return e;
}

EstimateMethod default_method(const ConvexBody& body) {
  if (has_analytic(body)) return EstimateMethod::analytic;
  if (body.spec().kind == BodyKind::ball && body.dim() <= 500) return EstimateMethod::quadrature;
  return EstimateMethod::monte_carlo;
}

ElongationEstimate elongation(const ConvexBody& body, EstimateMethod method,
                              std::uint64_t samples, RandomStream& stream, unsigned workers) {
  const int d = body.dim();
  if (d < 2) throw ValidationError("elongation needs d >= 2");
  ElongationEstimate e;
  e.method = method;
  switch (method) {
    case EstimateMethod::analytic: {
      if (!has_analytic(body))
        throw UnsupportedMethodError("analytic elongation is available only for planar "
                                     "bodies with a closed-form second moment, not " +
                                     to_string(body.spec()));
      e.log_value = std::log(3.0) + log_rho(2) + std::log(*body.mean_squared_distance()) -
                    std::log(*body.volume());
      e.value = std::exp(e.log_value);
      return e;
    }
    case EstimateMethod::quadrature: {
      if (body.spec().kind != BodyKind::ball)
        throw UnsupportedMethodError("quadrature elongation applies to balls only, not " +
                                     to_string(body.spec()));
      return ball_elongation(d);
    }
    case EstimateMethod::monte_carlo: {
      const auto E = mean_dist_power_mc(body, d, samples, stream, workers);
      double log_v, rel_v = 0.0;
      if (auto v = body.volume()) {
        log_v = std::log(*v);
      } else {
        const auto ve = estimate_volume(body, stream, samples);
        if (!(ve.value > 0.0)) throw SamplingError("volume estimate is zero");
        log_v = std::log(ve.value);
        rel_v = ve.std_error / ve.value;
      }
      e.log_value = std::log(3.0) + log_rho(d) + E.log_value - log_v;
      e.value = std::exp(e.log_value);
      const double rel_e = E.std_error / E.value;
      e.std_error = e.value * std::hypot(rel_e, rel_v);
      e.samples = E.samples;
      return e;
    }
  }
  return e;
}

ElongationEstimate default_lambda(const ConvexBody& body, RandomStream& stream,
                                  unsigned workers) {
  return elongation(body, default_method(body), 10'000'000, stream, workers);
}

// ---------------------------------------------------------- coupling

double coupling_g(double t, double z, double c, int d) {
  const double h = 0.5 * d;
  const double z2 = z * z;
  return 0.5 * std::pow((t + c) * (t + c) + z2, h) + 0.5 * std::pow((c - t) * (c - t) + z2, h);
}

namespace {

struct CouplingChunk {
  detail::ShiftedMoments g1, g0, diff;
  double max_abs_c = 0.0;
  double min_rel = std::numeric_limits<double>::infinity();
  std::uint64_t violations = 0;
  std::vector<double> differences;
  std::vector<CouplingSample> couplings;
};

}  // namespace

CoupledSteinerResult coupled_steiner_estimator(const ConvexBody& body, std::span<const double> u,
                                               std::uint64_t samples, RandomStream& stream,
                                               unsigned workers, bool keep_samples) {
  const int d = body.dim();
  if (static_cast<int>(u.size()) != d) throw ValidationError("coupling: u has wrong dimension");
  if (std::abs(detail::norm(u) - 1.0) > 1e-12) throw ValidationError("coupling: u must be a unit vector");
  if (samples < 1000) throw ValidationError("samples must be >= 1000");
  const Point dir(u.begin(), u.end());
  const std::uint64_t master = stream.next_u64();

  const auto parts = detail::run_chunks<CouplingChunk>(
      samples, kPairsPerChunk, master, workers, [&](RandomStream& s, std::uint64_t m) {
        CouplingChunk out;
        if (keep_samples) {
          out.differences.reserve(m);
          out.couplings.reserve(m);
        }
        const PointCloud cloud = sample(body, s, 2 * m);
        Point q1(d), q2(d);
        auto split = [&](std::span<const double> p, Point& q, double& mid, double& len) {
          const double alpha = detail::dot(p, dir);
          for (int i = 0; i < d; ++i) q[i] = p[i] - alpha * dir[i];
          const auto c = body.chord(dir, q, alpha);
          if (!c) throw DomainError("coupling: chord along u missed a sampled point");
          mid = 0.5 * (c->a + c->b);
          len = std::max(0.0, c->length());
        };
        for (std::uint64_t k = 0; k < m; ++k) {
          double mid1, len1, mid2, len2;
          split(cloud.point(k), q1, mid1, len1);
          split(cloud.point(k + m), q2, mid2, len2);
          const double xi1 = s.uniform(-0.5 * len1, 0.5 * len1);
          const double xi2 = s.uniform(-0.5 * len2, 0.5 * len2);
          CouplingSample cs{xi1 - xi2, detail::distance(q1, q2), mid1 - mid2};
          const double g1 = coupling_g(cs.eta_tilde, cs.z, std::abs(cs.c), d);
          const double g0 = coupling_g(cs.eta_tilde, cs.z, 0.0, d);
          const double diff = g1 - g0;
          out.g1.add_linear(g1);
          out.g0.add_linear(g0);
          out.diff.add_linear(diff);
          out.max_abs_c = std::max(out.max_abs_c, std::abs(cs.c));
          const double rel = g1 > 0.0 ? diff / g1 : 0.0;
          out.min_rel = std::min(out.min_rel, rel);
          if (rel < -1e-12) ++out.violations;
          if (keep_samples) {
            out.differences.push_back(diff);
            out.couplings.push_back(cs);
          }
        }
        return out;
      });

  CoupledSteinerResult r;
  detail::ShiftedMoments g1, g0, diff;
  double min_rel = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    g1.merge(p.g1);
    g0.merge(p.g0);
    diff.merge(p.diff);
    r.max_abs_c = std::max(r.max_abs_c, p.max_abs_c);
    min_rel = std::min(min_rel, p.min_rel);
    r.violations += p.violations;
    r.differences.insert(r.differences.end(), p.differences.begin(), p.differences.end());
    r.couplings.insert(r.couplings.end(), p.couplings.begin(), p.couplings.end());
  }
  r.original = from_moments(g1, EstimateMethod::monte_carlo);
  r.symmetrized = from_moments(g0, EstimateMethod::monte_carlo);
  r.mean_difference = static_cast<double>(diff.s1 / diff.n);
  r.difference_std_error = std::exp(diff.log_std_error());
  r.min_relative_difference = min_rel;
  return r;
}

}  // namespace anglelab
