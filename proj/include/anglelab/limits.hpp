#pragma once

// Ensembles of the normalized maximal-angle statistic
//   Y = lambda_d(K) n^3 / 6 (pi - phi)^{d-1},
// their distance to Exp(1), the small-eps tail ratio and the
// symmetrization probe.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "anglelab/bodies.hpp"
#include "anglelab/elongation.hpp"
#include "anglelab/random.hpp"

namespace anglelab {

struct TrialEnsemble {
  std::string spec;
  int d = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  ElongationEstimate lambda;
  std::uint64_t master_seed = 0;
  std::vector<double> y_values;
  std::vector<double> gaps;        // pi - phi per trial
  std::uint64_t resampled = 0;     // redraws after coincident points
  std::uint64_t cross_checked = 0; // trials also scanned exhaustively
};

// exp(log_lambda + 3 ln n - ln 6 + (d - 1) ln gap); 0 when gap is 0.
double y_statistic(double log_lambda, std::size_t n, double gap, int d);

// Stream seed for attempt `attempt` of trial `trial`. Attempt 0 is
// substream_seed(master, trial); redraws nest one more level.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t attempt);

// Trial i samples n points from trial_seed(master, i, 0) and takes the
// pruned scan; up to n = 50 it takes the exhaustive scan instead. Every
// 100th trial with n > 50 is rescanned exhaustively and must agree on
// (phi, gap) bit for bit.
TrialEnsemble run_trials(const ConvexBody& body, std::size_t n, std::size_t trials,
                         const ElongationEstimate& lambda, std::uint64_t master_seed,
                         unsigned workers = 0);

// sup_y |F_M(y) - (1 - e^{-y})| over the sorted sample.
double ks_distance_exp1(std::span<const double> y);

struct TailRow {
  double c = 0.0;            // angle threshold
  double empirical = 0.0;    // fraction of trials with phi > c
  double theoretical = 0.0;  // 1 - exp(-lambda (pi - c)^{d-1} n^3 / 6)
  double std_error = 0.0;    // binomial, of the empirical fraction
};

struct GofReport {
  double ks_distance = 0.0;
  std::vector<std::pair<double, double>> ecdf;  // (y, F_M(y)) at the jumps
  std::vector<TailRow> tail;
};

// 20 gaps spaced geometrically between the 1st and 99th percentile of the
// positive observed gaps.
std::vector<double> gap_grid(std::vector<double> gaps, std::size_t points = 20);

// Needs at least 100 trials.
GofReport gof_report(const TrialEnsemble& ensemble);

struct TailRatioRow {
  double epsilon = 0.0;
  std::uint64_t triples = 0;
  double probability = 0.0;   // P(largest angle > pi - eps)
  double ratio = 0.0;         // probability / (lambda eps^{d-1})
  double std_error = 0.0;     // of the ratio
  // 3 P(angle at P3 > pi - eps) from the same triples, and the mean and
  // standard error of 1{any} - 3 * 1{at P3}.
  double fixed_apex_times3 = 0.0;
  double identity_mean = 0.0;
  double identity_std_error = 0.0;
};

// One stream of independent triples serves every eps. Each eps must lie in
// (0, pi/2), where at most one angle of a triangle can exceed pi - eps.
std::vector<TailRatioRow> tail_ratio(const ConvexBody& body, const ElongationEstimate& lambda,
                                     std::span<const double> epsilons, std::uint64_t triples,
                                     RandomStream& stream, unsigned workers = 0);

struct ProportionInterval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
// Wilson score interval, z = 1.96 by default.
ProportionInterval wilson_interval(std::uint64_t hits, std::uint64_t total, double z = 1.96);

struct ExceedanceRow {
  double c = 0.0;
  ProportionInterval original;     // P(phi_K > c)
  ProportionInterval symmetrized;  // P(phi_{S_u K} > c)
  bool flagged = false;            // symmetrized interval entirely above original
};

struct ConjectureReport {
  std::string original_spec;
  std::string symmetrized_spec;
  TrialEnsemble original;
  TrialEnsemble symmetrized;
  std::vector<ExceedanceRow> rows;
  std::size_t flagged = 0;
};

// Independent ensembles for K (seed master) and S_u K (seed
// splitmix64(master)); an empty c_grid is replaced by pi minus the gap grid
// of the pooled gaps.
ConjectureReport conjecture_probe(const BodyPtr& body, std::span<const double> u, std::size_t n,
                                  std::size_t trials, std::vector<double> c_grid,
                                  std::uint64_t master_seed, unsigned workers = 0);

}  // namespace anglelab
