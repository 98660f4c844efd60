#include "anglelab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "anglelab/elongation.hpp"
#include "anglelab/errors.hpp"
#include "anglelab/parallel.hpp"
#include "anglelab/quadrature.hpp"
#include "format.hpp"

namespace anglelab {

double psi(double t) { return 2.0 * std::log1p(-t) + std::log1p(t); }

double psi_prime(double t) { return -(1.0 + 3.0 * t) / ((1.0 - t) * (1.0 + t)); }

double psi_second(double t) {
  return -1.0 / ((1.0 + t) * (1.0 + t)) - 2.0 / ((1.0 - t) * (1.0 - t));
}

SaddleReport saddle_analysis() {
  // psi' > 0 near -1 and psi'(0) = -1.
  double lo = -1.0 + 1e-12, hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (psi_prime(mid) > 0.0 ? lo : hi) = mid;
  }
  SaddleReport r;
  r.t_star = std::abs(psi_prime(lo)) < std::abs(psi_prime(hi)) ? lo : hi;
  r.psi_at_star = psi(r.t_star);
  r.exp_psi_at_star = std::exp(r.psi_at_star);
  r.psi2_at_star = psi_second(r.t_star);
  return r;
}

double log_q_d_exact(int d) {
  if (d < 3) throw DomainError("Q_d needs d >= 3");
  const double k = 0.5 * (d - 3);
  const double t_star = -1.0 / 3.0;
  const double shift = k * psi(t_star);
  auto f = [&](double t) { return std::exp(1.5 * std::log1p(-t) + k * psi(t) - shift); };
  std::vector<double> breaks{-1.0, 0.0};
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (double j : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0}) {
    const double b = t_star + j * w;
    if (b > -1.0 && b < 0.0) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  const auto r = integrate(f, std::span<const double>(breaks), {.rel_tol = 1e-12, .abs_tol = 0.0});
  return shift + std::log(r.value);
}

double log_q_d_laplace(int d) {
  const double dd = d;
  return 0.5 * std::log(std::numbers::pi) + std::log(3.0 * std::sqrt(3.0) / 4.0) -
         0.5 * std::log(dd) + 0.5 * dd * std::log(32.0 / 27.0);
}

double log_ball_moment_leading(int d) {
  return -0.5 * std::log(6.0) + d * std::log(8.0 / (3.0 * std::sqrt(3.0)));
}

double log_ball_elongation_leading(int d) {
  return 0.5 * std::log(3.0) + d * std::log(2.0 / (3.0 * std::sqrt(3.0)));
}

std::vector<AsymptoticsRow> ball_asymptotics_table(std::span<const int> d_list,
                                                   unsigned workers) {
  for (int d : d_list)
    if (d < 2 || d > 500) throw ValidationError("d must be in [2, 500]");
  std::vector<AsymptoticsRow> rows(d_list.size());
  parallel_for(rows.size(), resolve_workers(workers), [&](std::size_t i) {
    const int d = d_list[i];
    const auto lam = ball_elongation(d);
    auto& r = rows[i];
    r.d = d;
    r.log_E = mean_dist_power_ball_quadrature(d).log_value;
    r.log_E_leading = log_ball_moment_leading(d);
    r.log_lambda = lam.log_value;
    r.log_lambda_leading = log_ball_elongation_leading(d);
    r.rel_error_E = std::abs(std::expm1(r.log_E_leading - r.log_E));
    r.rel_error_lambda = std::abs(std::expm1(r.log_lambda_leading - r.log_lambda));
  });
  return rows;
}

std::vector<CorollaryRow> corollary_limit(std::span<const int> d_list, unsigned workers) {
  for (int d : d_list)
    if (d < 2 || d > 500) throw ValidationError("d must be in [2, 500]");
  std::vector<CorollaryRow> rows(d_list.size());
  parallel_for(rows.size(), resolve_workers(workers), [&](std::size_t i) {
    auto& r = rows[i];
    r.d = d_list[i];
    r.log_lambda = ball_elongation(r.d).log_value;
    r.value = std::exp((std::log(6.0) - r.log_lambda) / (r.d - 1));
    r.rel_deviation = std::abs(r.value / kCorollaryLimit - 1.0);
  });
  return rows;
}

std::string asymptotics_csv(const std::vector<AsymptoticsRow>& rows) {
  std::ostringstream out;
  out << "d,ln E|P1P2|^d (quadrature),ln[(1/sqrt6)(8/(3sqrt3))^d],"
         "ln lambda_d(B) (quadrature),ln[sqrt3(2/(3sqrt3))^d],"
         "|E_leading/E - 1|,|lambda_leading/lambda - 1|\n";
  for (const auto& r : rows)
    out << r.d << ',' << detail::shortest(r.log_E) << ',' << detail::shortest(r.log_E_leading)
        << ',' << detail::shortest(r.log_lambda) << ','
        << detail::shortest(r.log_lambda_leading) << ',' << detail::shortest(r.rel_error_E)
        << ',' << detail::shortest(r.rel_error_lambda) << '\n';
  return out.str();
}

std::string corollary_csv(const std::vector<CorollaryRow>& rows) {
  std::ostringstream out;
  out << "d,ln lambda_d(B),(6/lambda_d(B))^(1/(d-1)),|value/(3sqrt3/2) - 1|\n";
  for (const auto& r : rows)
    out << r.d << ',' << detail::shortest(r.log_lambda) << ',' << detail::shortest(r.value)
        << ',' << detail::shortest(r.rel_deviation) << '\n';
  return out.str();
}

}  // namespace anglelab
