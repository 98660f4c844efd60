#pragma once

// E|P1 P2|^p and the elongation lambda_d(K) = 3 rho_d E|P1 P2|^d / V_d(K).

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "anglelab/bodies.hpp"
#include "anglelab/random.hpp"

namespace anglelab {

enum class EstimateMethod { analytic, quadrature, monte_carlo };

std::string_view to_string(EstimateMethod m);
// Accepts "analytic", "quadrature", "monte-carlo" (also "mc").
EstimateMethod parse_method(std::string_view text);

struct ElongationEstimate {
  double value = 0.0;
  double log_value = 0.0;
  EstimateMethod method = EstimateMethod::analytic;
  double std_error = 0.0;  // 0 for analytic and quadrature
  std::uint64_t samples = 0;
};

// Pairs per independently seeded chunk. The chunk layout depends only on the
// sample count, never on the worker count.
inline constexpr std::uint64_t kPairsPerChunk = 1 << 15;

// Mean of |P1 - P2|^power over `samples` independent uniform pairs. For
// power > 50 the terms are accumulated as exp(power log|P1P2| - shift) with a
// running shift. One 64-bit draw from `stream` seeds the chunk substreams.
ElongationEstimate mean_dist_power_mc(const ConvexBody& body, int power, std::uint64_t samples,
                                      RandomStream& stream, unsigned workers = 0);

// E|P1P2|^d for the unit ball, 2 <= d <= 500:
//   C_d d^2 int_0^pi Psi_d(-cos th) sin^{d-2} th d th,
//   Psi_d(t) = (2 / 3d) int_0^1 s^{d-1} (1 + s^2 - 2 s t)^{d/2} ds,
// the second line after r2 = s r1 in the double radial integral restricted to
// r2 < r1. Both levels run in log space with adaptive Gauss-Kronrod.
ElongationEstimate mean_dist_power_ball_quadrature(int d);

// The two halves of the ball integral: J1 over t in [-1, 0], J2 over [0, 1],
// so E = C_d d^2 (J1 + J2).
struct BallMomentPieces {
  int d = 0;
  double log_C_d = 0.0;
  double log_J1 = 0.0;
  double log_J2 = 0.0;
  double log_E = 0.0;
};
BallMomentPieces ball_moment_pieces(int d);

// lambda_d(B) for any ball, from the quadrature path.
ElongationEstimate ball_elongation(int d);

// lambda_d(K). analytic: planar bodies with closed-form second moment and
// volume. quadrature: balls only. monte-carlo: E from `samples` pairs and the
// volume exact or hit-or-miss from `samples` proposals, errors combined in
// quadrature. Throws UnsupportedMethodError when the method does not apply.
ElongationEstimate elongation(const ConvexBody& body, EstimateMethod method,
                              std::uint64_t samples, RandomStream& stream,
                              unsigned workers = 0);

// Best available lambda: analytic, else quadrature, else monte-carlo with
// 10^7 pairs.
ElongationEstimate default_lambda(const ConvexBody& body, RandomStream& stream,
                                  unsigned workers = 0);
EstimateMethod default_method(const ConvexBody& body);

// ---------------------------------------------- Steiner coupling

struct CouplingSample {
  double eta_tilde = 0.0;  // xi1 - xi2, offsets within the centered chords
  double z = 0.0;          // |Q1 Q2|, distance of the projections onto u-perp
  double c = 0.0;          // (A1 + B1)/2 - (A2 + B2)/2, chord midpoint offset
};

// g_{t,z}(c) = ((t + c)^2 + z^2)^{d/2} / 2 + ((c - t)^2 + z^2)^{d/2} / 2.
// Even and convex in c, so g(|C|) >= g(0).
double coupling_g(double t, double z, double c, int d);

struct CoupledSteinerResult {
  ElongationEstimate original;     // E_d(K) = E g(|C|)
  ElongationEstimate symmetrized;  // E_d(S_u K) = E g(0)
  double mean_difference = 0.0;    // E [g(|C|) - g(0)]
  double difference_std_error = 0.0;
  double max_abs_c = 0.0;
  // min over samples of (g(|C|) - g(0)) / g(|C|); never below -1e-12 unless
  // the chord computation is broken.
  double min_relative_difference = 0.0;
  std::uint64_t violations = 0;  // samples with relative difference < -1e-12
  std::vector<double> differences;
  std::vector<CouplingSample> couplings;
};

// Draws P1, P2 uniform in K, splits each into the projection Q_j onto u-perp
// and a chord [A_j, B_j] along u, redraws the offset xi_j uniformly on the
// centered chord, and evaluates both sides of the coupling.
CoupledSteinerResult coupled_steiner_estimator(const ConvexBody& body, std::span<const double> u,
                                               std::uint64_t samples, RandomStream& stream,
                                               unsigned workers = 0, bool keep_samples = true);

}  // namespace anglelab
