#pragma once

// Large-d behaviour of the ball: the saddle point of
// psi(t) = 2 ln(1 - t) + ln(1 + t), the integral Q_d it controls, and the
// leading-order forms of E|P1P2|^d and lambda_d(B).

#include <span>
#include <string>
#include <vector>

namespace anglelab {

double psi(double t);
double psi_prime(double t);   // -(1 + 3t) / (1 - t^2)
double psi_second(double t);  // -1/(1 + t)^2 - 2/(1 - t)^2

struct SaddleReport {
  double t_star = 0.0;
  double psi_at_star = 0.0;
  double exp_psi_at_star = 0.0;
  double psi2_at_star = 0.0;
};

// Bisection for the root of psi' on (-1, 0).
SaddleReport saddle_analysis();

// ln Q_d, Q_d = int_{-1}^0 (1 - t)^{3/2} exp((d - 3)/2 psi(t)) dt, d >= 3.
double log_q_d_exact(int d);
// ln of sqrt(pi) (3 sqrt 3 / (4 sqrt d)) (32/27)^{d/2}.
double log_q_d_laplace(int d);

// ln of (1/sqrt 6) (8 / (3 sqrt 3))^d and sqrt 3 (2 / (3 sqrt 3))^d.
double log_ball_moment_leading(int d);
double log_ball_elongation_leading(int d);

struct AsymptoticsRow {
  int d = 0;
  double log_E = 0.0;
  double log_E_leading = 0.0;
  double log_lambda = 0.0;
  double log_lambda_leading = 0.0;
  double rel_error_E = 0.0;       // |leading / exact - 1|
  double rel_error_lambda = 0.0;
};

// Rows in the order of d_list, each d in [2, 500].
std::vector<AsymptoticsRow> ball_asymptotics_table(std::span<const int> d_list,
                                                   unsigned workers = 0);

struct CorollaryRow {
  int d = 0;
  double log_lambda = 0.0;
  double value = 0.0;         // (6 / lambda_d(B))^{1/(d-1)}
  double rel_deviation = 0.0; // |value / (3 sqrt 3 / 2) - 1|, reported for every d
};

inline constexpr double kCorollaryLimit = 2.598076211353315940;  // 3 sqrt(3) / 2

std::vector<CorollaryRow> corollary_limit(std::span<const int> d_list, unsigned workers = 0);

// CSV with each column header naming its formula.
std::string asymptotics_csv(const std::vector<AsymptoticsRow>& rows);
std::string corollary_csv(const std::vector<CorollaryRow>& rows);

}  // namespace anglelab
