#include "anglelab/specfun.hpp"

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "anglelab/errors.hpp"

namespace anglelab {

namespace {

using NoThrowPolicy = boost::math::policies::policy<
    boost::math::policies::domain_error<boost::math::policies::ignore_error>,
    boost::math::policies::pole_error<boost::math::policies::ignore_error>,
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::promote_double<false>>;

constexpr double kLogPi = 1.1447298858494001741434273513531;  // ln(pi)
constexpr double kLog2 = std::numbers::ln2;

void require_dimension(int d, int minimum, const char* what) {
  if (d < minimum)
    throw DomainError(std::string(what) + ": dimension must be >= " +
                      std::to_string(minimum) + ", got " + std::to_string(d));
}

}  // namespace

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0)
    throw DomainError("log_gamma: argument must be positive and finite");
  return boost::math::lgamma(x, NoThrowPolicy());
}

double log_rho(int d) {
  require_dimension(d, 2, "rho");
  const double dd = d;
  return 0.5 * dd * kLogPi + log_gamma(dd) - (2.0 * dd - 1.0) * kLog2 -
         log_gamma(0.5 * (dd + 1.0)) - log_gamma(dd + 0.5);
}

double rho(int d) { return std::exp(log_rho(d)); }

double log_ball_volume(int d, double r) {
  if (d < 0) throw DomainError("ball_volume: dimension must be >= 0");
  if (!(r > 0.0) || !std::isfinite(r))
    throw DomainError("ball_volume: radius must be positive");
  if (d == 0) return 0.0;
  const double dd = d;
  return 0.5 * dd * kLogPi + dd * std::log(r) - log_gamma(0.5 * dd + 1.0);
}

double ball_volume(int d, double r) { return std::exp(log_ball_volume(d, r)); }

double log_cosine_density_constant(int d) {
  require_dimension(d, 2, "C_d");
  const double dd = d;
  return log_gamma(0.5 * dd) - 0.5 * kLogPi - log_gamma(0.5 * (dd - 1.0));
}

DimensionalConstants dimensional_constants(int d) {
  require_dimension(d, 2, "dimensional_constants");
  return {d, log_rho(d), log_ball_volume(d - 1), log_cosine_density_constant(d)};
}

}  // namespace anglelab
