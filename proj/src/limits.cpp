#include "anglelab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "anglelab/errors.hpp"
#include "anglelab/geometry.hpp"
#include "anglelab/parallel.hpp"
#include "chunked.hpp"

namespace anglelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBruteForceMaxN = 50;
constexpr std::size_t kCrossCheckEvery = 100;
constexpr std::uint64_t kMaxAttempts = 64;

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct TrialOutcome {
  double gap = 0.0;
  std::uint64_t redraws = 0;
  bool cross_checked = false;
};

TrialOutcome run_one(const ConvexBody& body, std::size_t n, std::uint64_t master,
                     std::uint64_t trial) {
  TrialOutcome out;
  for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    RandomStream stream(trial_seed(master, trial, attempt));
    const PointCloud cloud = sample(body, stream, n);
    try {
      if (n <= kBruteForceMaxN) {
        out.gap = max_angle_bruteforce(cloud).gap;
      } else {
        const auto fast = max_angle_pruned(cloud);
        if (trial % kCrossCheckEvery == 0) {
          const auto slow = max_angle_bruteforce(cloud);
          if (slow.gap != fast.gap || slow.phi != fast.phi)
            throw std::logic_error("pruned scan disagrees with the exhaustive scan in trial " +
                                   std::to_string(trial));
          out.cross_checked = true;
        }
        out.gap = fast.gap;
      }
      return out;
    } catch (const DuplicatePointError&) {
      ++out.redraws;
    }
  }
  throw SamplingError("trial " + std::to_string(trial) + ": coincident points in " +
                      std::to_string(kMaxAttempts) + " consecutive draws");
}

}  // namespace

double y_statistic(double log_lambda, std::size_t n, double gap, int d) {
  if (gap <= 0.0) return 0.0;
  return std::exp(log_lambda + 3.0 * std::log(static_cast<double>(n)) - std::log(6.0) +
                  (d - 1) * std::log(gap));
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t attempt) {
  const std::uint64_t s = substream_seed(master, trial);
  return attempt == 0 ? s : substream_seed(s, attempt);
}

TrialEnsemble run_trials(const ConvexBody& body, std::size_t n, std::size_t trials,
                         const ElongationEstimate& lambda, std::uint64_t master_seed,
                         unsigned workers) {
  if (n < 3) throw ValidationError("n must be >= 3");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (!(lambda.value > 0.0)) throw ValidationError("lambda must be positive");
  TrialEnsemble e;
  e.spec = to_string(body.spec());
  e.d = body.dim();
  e.n = n;
  e.trials = trials;
  e.lambda = lambda;
  e.master_seed = master_seed;

  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, resolve_workers(workers),
               [&](std::size_t i) { outcomes[i] = run_one(body, n, master_seed, i); });
  e.gaps.reserve(trials);
  e.y_values.reserve(trials);
  for (const auto& o : outcomes) {
    e.gaps.push_back(o.gap);
    e.y_values.push_back(y_statistic(lambda.log_value, n, o.gap, e.d));
    e.resampled += o.redraws;
    e.cross_checked += o.cross_checked ? 1 : 0;
  }
  return e;
}

double ks_distance_exp1(std::span<const double> y) {
  if (y.empty()) throw ValidationError("ks distance of an empty sample");
  std::vector<double> s(y.begin(), y.end());
  std::sort(s.begin(), s.end());
  const double m = static_cast<double>(s.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = s[i] <= 0.0 ? 0.0 : -std::expm1(-s[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return worst;
}

std::vector<double> gap_grid(std::vector<double> gaps, std::size_t points) {
  std::erase_if(gaps, [](double g) { return !(g > 0.0); });
  if (gaps.empty() || points == 0) return {};
  std::sort(gaps.begin(), gaps.end());
  const double lo = percentile(gaps, 0.01);
  const double hi = percentile(gaps, 0.99);
  if (points == 1 || !(hi > lo)) return {lo};
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(points - 1));
  return grid;
}

GofReport gof_report(const TrialEnsemble& e) {
  if (e.y_values.size() < 100) throw ValidationError("gof report needs at least 100 trials");
  GofReport r;
  r.ks_distance = ks_distance_exp1(e.y_values);
  std::vector<double> sorted = e.y_values;
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i])
      r.ecdf.emplace_back(sorted[i], static_cast<double>(i + 1) / m);

  const double scale = static_cast<double>(e.n) * e.n * e.n / 6.0;
  for (double g : gap_grid(e.gaps)) {
    const auto below = std::count_if(e.gaps.begin(), e.gaps.end(), [&](double x) { return x < g; });
    TailRow row;
    row.c = kPi - g;
    row.empirical = static_cast<double>(below) / m;
    row.theoretical = -std::expm1(-e.lambda.value * std::pow(g, e.d - 1) * scale);
    row.std_error = std::sqrt(row.empirical * (1.0 - row.empirical) / m);
    r.tail.push_back(row);
  }
  return r;
}

// ------------------------------------------------------------ tail ratio

namespace {

struct TailCounts {
  std::vector<std::uint64_t> any, fixed;
};

}  // namespace

std::vector<TailRatioRow> tail_ratio(const ConvexBody& body, const ElongationEstimate& lambda,
                                     std::span<const double> epsilons, std::uint64_t triples,
                                     RandomStream& stream, unsigned workers) {
  if (epsilons.empty()) throw ValidationError("tail ratio needs at least one epsilon");
  for (double eps : epsilons)
    if (!(eps > 0.0 && eps < 0.5 * kPi)) throw ValidationError("epsilon must lie in (0, pi/2)");
  if (triples < 1) throw ValidationError("triples must be >= 1");
  const int d = body.dim();
  const std::size_t ne = epsilons.size();
  const std::uint64_t master = stream.next_u64();
  constexpr std::uint64_t kTriplesPerChunk = 1 << 16;

  const auto parts = detail::run_chunks<TailCounts>(
      triples, kTriplesPerChunk, master, workers, [&](RandomStream& s, std::uint64_t m) {
        TailCounts c{std::vector<std::uint64_t>(ne, 0), std::vector<std::uint64_t>(ne, 0)};
        const PointCloud cloud = sample(body, s, 3 * m);
        for (std::uint64_t k = 0; k < m; ++k) {
          const std::span<const double> p[3] = {cloud.point(k), cloud.point(k + m),
                                                cloud.point(k + 2 * m)};
          // The largest angle is opposite the longest side.
          double side[3];  // side[v]: length^2 of the side opposite vertex v
          for (int v = 0; v < 3; ++v) {
            const auto& a = p[(v + 1) % 3];
            const auto& b = p[(v + 2) % 3];
            double s2 = 0.0;
            for (int i = 0; i < d; ++i) s2 += (a[i] - b[i]) * (a[i] - b[i]);
            side[v] = s2;
          }
          const int apex = static_cast<int>(std::max_element(side, side + 3) - side);
          const double gap = apex_gap(p[(apex + 1) % 3], p[apex], p[(apex + 2) % 3]);
          for (std::size_t e = 0; e < ne; ++e) {
            if (gap < epsilons[e]) {
              ++c.any[e];
              // Only an angle above pi/2 can exceed pi - eps, and that angle
              // is the largest one.
              if (apex == 2) ++c.fixed[e];
            }
          }
        }
        return c;
      });

  std::vector<TailRatioRow> rows(ne);
  const double N = static_cast<double>(triples);
  for (std::size_t e = 0; e < ne; ++e) {
    std::uint64_t any = 0, fixed = 0;
    for (const auto& p : parts) {
      any += p.any[e];
      fixed += p.fixed[e];
    }
    auto& r = rows[e];
    r.epsilon = epsilons[e];
    r.triples = triples;
    r.probability = static_cast<double>(any) / N;
    const double scale = lambda.value * std::pow(r.epsilon, d - 1);
    r.ratio = r.probability / scale;
    r.std_error = std::sqrt(r.probability * (1.0 - r.probability) / N) / scale;
    const double pf = static_cast<double>(fixed) / N;
    r.fixed_apex_times3 = 3.0 * pf;
    // D = 1{any} - 3 1{fixed}: D = -2 when the fixed apex is the one,
    // D = 1 when another apex is, 0 otherwise.
    const double n_minus2 = static_cast<double>(fixed);
    const double n_plus1 = static_cast<double>(any - fixed);
    const double mean = (n_plus1 - 2.0 * n_minus2) / N;
    const double second = (n_plus1 + 4.0 * n_minus2) / N;
    r.identity_mean = mean;
    r.identity_std_error = triples > 1 ? std::sqrt(std::max(0.0, second - mean * mean) / (N - 1.0)) : 0.0;
  }
  return rows;
}

// ------------------------------------------------------------ conjecture

ProportionInterval wilson_interval(std::uint64_t hits, std::uint64_t total, double z) {
  if (total == 0) throw ValidationError("wilson interval of an empty sample");
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

ConjectureReport conjecture_probe(const BodyPtr& body, std::span<const double> u, std::size_t n,
                                  std::size_t trials, std::vector<double> c_grid,
                                  std::uint64_t master_seed, unsigned workers) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (n < 3) throw ValidationError("n must be >= 3");
  const BodyPtr sym = steiner_symmetrize(body, u);
  ConjectureReport r;
  r.original_spec = to_string(body->spec());
  r.symmetrized_spec = to_string(sym->spec());

  RandomStream lambda_stream(substream_seed(master_seed, 0x6c616d626461ULL));
  const auto lam_k = default_lambda(*body, lambda_stream, workers);
  const auto lam_s = default_lambda(*sym, lambda_stream, workers);
  r.original = run_trials(*body, n, trials, lam_k, master_seed, workers);
  r.symmetrized = run_trials(*sym, n, trials, lam_s, splitmix64(master_seed), workers);

  if (c_grid.empty()) {
    std::vector<double> pooled = r.original.gaps;
    pooled.insert(pooled.end(), r.symmetrized.gaps.begin(), r.symmetrized.gaps.end());
    for (double g : gap_grid(pooled)) c_grid.push_back(kPi - g);
  }
  for (double c : c_grid) {
    auto exceed = [&](const TrialEnsemble& e) {
      const auto hits = std::count_if(e.gaps.begin(), e.gaps.end(),
                                      [&](double g) { return kPi - g > c; });
      return wilson_interval(static_cast<std::uint64_t>(hits), e.gaps.size());
    };
    ExceedanceRow row;
    row.c = c;
    row.original = exceed(r.original);
    row.symmetrized = exceed(r.symmetrized);
    row.flagged = row.symmetrized.lo > row.original.hi;
    r.flagged += row.flagged ? 1 : 0;
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace anglelab
