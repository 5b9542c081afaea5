#include "telex/brownian.hpp"

#include <cmath>
#include <sstream>

namespace telex::brownian {

namespace {

// expm1(z) - z without cancellation for small |z|
double expm1_minus_linear(double z) {
  if (std::abs(z) > 0.5) return std::expm1(z) - z;
  double term = z * z / 2.0;
  double sum = term;
  for (int n = 3; n < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++n) {
    term *= z / n;
    sum += term;
  }
  return sum;
}

void require_strip_point(double L, double y) {
  if (!(std::isfinite(L) && L > 0.0) || !(y >= 0.0 && y <= L)) {
    std::ostringstream os;
    os << "y = " << y << " outside [0, " << L << "]";
    throw Error(Errc::OutOfDomain, os.str());
  }
}

}  // namespace

double exit_prob_upper(const Interval& iv, double x) {
  validate_interval_start(iv, x);
  return (x - iv.a()) / iv.length();
}

double mean_exit_time(const Interval& iv, double x) {
  validate_interval_start(iv, x);
  return (iv.b() - x) * (x - iv.a());
}

double drift_exit_prob_upper(const Interval& iv, double x, double mu) {
  validate_interval_start(iv, x);
  const double xi = x - iv.a();
  const double len = iv.length();
  if (std::abs(mu) < 1e-10) return xi / len;
  if (mu < 0.0 && -2.0 * mu * len > 700.0) {
    // Divide through by e^{-2 mu b}; every exponent is then <= 0.
    const double num = std::exp(-2.0 * mu * (x - iv.b())) - std::exp(2.0 * mu * len);
    return num / -std::expm1(2.0 * mu * len);
  }
  return std::expm1(-2.0 * mu * xi) / std::expm1(-2.0 * mu * len);
}

double drift_mean_exit_time(const Interval& iv, double x, double mu) {
  validate_interval_start(iv, x);
  const double xi = x - iv.a();
  const double len = iv.length();
  if (std::abs(mu) * len < 1e-6) {
    // (len g(xi) - xi g(len)) / (mu g(len)) with g(t) = expm1(-2 mu t) / (-2 mu),
    // both expanded in powers of mu.
    double num = 0.0;
    double den = 0.0;
    double coeff = 1.0;  // (-2 mu)^(n-1) / n!
    double xi_pow = 1.0;
    double len_pow = 1.0;
    for (int n = 1; n <= 8; ++n) {
      if (n > 1) coeff *= -2.0 * mu / n;
      xi_pow *= xi;
      len_pow *= len;
      den += coeff * len_pow;
      if (n >= 2) {
        // coeff / mu without dividing by a possibly-zero mu
        double c_over_mu = -2.0 / n;
        for (int k = 2; k < n; ++k) c_over_mu *= -2.0 * mu / k;
        num += c_over_mu * (len * xi_pow - xi * len_pow);
      }
    }
    return num / den;
  }
  if (std::abs(mu) * len < 1.0) {
    // linear parts of the two expm1 terms cancel exactly
    const double num =
        len * expm1_minus_linear(-2.0 * mu * xi) - xi * expm1_minus_linear(-2.0 * mu * len);
    return num / (mu * std::expm1(-2.0 * mu * len));
  }
  return (len * drift_exit_prob_upper(iv, x, mu) - xi) / mu;
}

std::pair<double, double> strip_refs(double L, double y) {
  require_strip_point(L, y);
  return {(L - y) / L, y * (L - y)};
}

}  // namespace telex::brownian
