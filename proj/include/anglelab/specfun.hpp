#pragma once

// Dimension-dependent constants, all assembled from log-gamma sums. Linear
// values are produced only at the API boundary; rho_d underflows a double
// near d = 400, so callers working in high dimension should stay in logs.

namespace anglelab {

// ln Gamma(x) for x > 0. Throws DomainError for x <= 0 or non-finite x.
double log_gamma(double x);

// rho_d = pi^{d/2} Gamma(d) / (2^{2d-1} Gamma((d+1)/2) Gamma(d+1/2)), d >= 2.
// It is the leading coefficient of the volume of the set of points seeing a
// segment of length l under an angle > pi - eps: rho_d l^d eps^{d-1}.
double log_rho(int d);
double rho(int d);

// Volume of the radius-r ball in R^d (d >= 1, r > 0); d = 0 gives 1.
double log_ball_volume(int d, double r = 1.0);
double ball_volume(int d, double r = 1.0);

// C_d = Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)): normalizer of the density of
// the cosine between two independent uniform directions in R^d, d >= 2.
double log_cosine_density_constant(int d);

struct DimensionalConstants {
  int d = 0;
  double log_rho_d = 0.0;
  double log_beta_dm1 = 0.0;  // ln volume of the unit ball in R^{d-1}
  double log_C_d = 0.0;
};

DimensionalConstants dimensional_constants(int d);

}  // namespace anglelab
