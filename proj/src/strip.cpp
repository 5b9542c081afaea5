#include "telex/strip.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "telex/parallel.hpp"

namespace telex::strip {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void require_open_strip(const PlanarStripProblem& prob, double y) {
  if (!(y > 0.0 && y < prob.L())) {
    std::ostringstream os;
    os << "y = " << y << " must lie strictly inside (0, " << prob.L() << ")";
    throw Error(Errc::OutOfDomain, os.str());
  }
}

// Transforms of u1 and u3 at z = 0 (both real and even in alpha). With
// S = sqrt(lambda^2 + alpha^2 c^2), A = |alpha| c, theta = |alpha| lambda / S,
// numerator and denominator of the closed forms are multiplied by
// e^{-theta L} and rewritten with expm1; every term stays bounded and there
// is no cancellation for alpha != 0.
struct TransformPair {
  double u1, u3;
};

TransformPair transforms_at_origin(double c, double lambda, double L, double alpha, double y) {
  if (alpha == 0.0) {
    const double den = lambda * L + 2.0 * c;
    return {lambda * (L - y) / den, (2.0 * c + lambda * (L - y)) / den};
  }
  const double a = std::abs(alpha);
  const double A = a * c;
  const double S = std::hypot(lambda, A);
  const double diff = lambda * lambda / (S + A);  // S - A
  const double theta = a * lambda / S;
  const double diff2 = diff * diff;
  const double D = 4.0 * S * A - diff2 * std::expm1(-2.0 * theta * L);
  const double decay = std::exp(-theta * y);
  const double inner = std::expm1(-2.0 * theta * (L - y));
  return {-lambda * lambda * decay * inner / D, decay * (4.0 * S * A - diff2 * inner) / D};
}

// Scaled denominator (1 + w)^2 - (1 - w)^2 e^{-2 k L w}.
double scaled_den(double k, double L, double w) {
  return 4.0 * w - (1.0 - w) * (1.0 - w) * std::expm1(-2.0 * k * L * w);
}

// Amplitudes of the w-integrals (dw-integrands, oscillatory factor removed).
struct Amplitudes {
  double k, L, y, E;

  // -(k / pi) e^{-k y w} expm1(-2 k (L - y) w) / (den cw)
  double u1(double w, double cw) const {
    const double m = std::expm1(-2.0 * k * (L - y) * w);
    if (w < 1e-300) return (k / kPi) * 2.0 * k * (L - y) / ((4.0 + 2.0 * k * L) * cw);
    return -(k / kPi) * std::exp(-k * y * w) * m / (scaled_den(k, L, w) * cw);
  }

  double g3(double w) const {
    if (w < 1e-300) return (4.0 + 2.0 * k * (L - y)) / (4.0 + 2.0 * k * L);
    const double m = std::expm1(-2.0 * k * (L - y) * w);
    return std::exp(-k * y * w) * (4.0 * w - (1.0 - w) * (1.0 - w) * m) / scaled_den(k, L, w);
  }

  double big_g(double w) const {
    if (w < 1e-300) return 2.0 * (2.0 + 2.0 * k * (L - y)) / (4.0 + 2.0 * k * L);
    const double m = std::expm1(-2.0 * k * (L - y) * w);
    return 2.0 * std::exp(-k * y * w) * (2.0 * w - (1.0 - w) * m) / scaled_den(k, L, w);
  }

  double u3(double w, double cw) const {
    return k / (kPi * (1.0 - E)) * (g3(w) - E) / (cw * cw * cw);
  }

  double u0_cos(double w, double cw) const {
    return k / (2.0 * kPi) * (big_g(w) - E) / cw;
  }

  double u0_sin(double w, double cw) const {
    return k / (2.0 * kPi) * w * (big_g(w) - E) / (cw * cw);
  }
};

// Part of u0 carried by the exponential jump at s = 0: half the atom of u3
// smeared by the first horizontal run.
double u0_jump(double k, double E, double s) {
  if (s > 0.0) return 0.5 * E * k * std::exp(-k * s);
  if (s == 0.0) return 0.25 * E * k;
  return 0.0;
}

double mean_time_unchecked(double c, double lambda, double L, double y,
                           std::optional<Direction2D> j) {
  const double q = lambda * y * (L - y) / (c * c);
  if (!j) return q + (2.0 * lambda * L + c) / (2.0 * lambda * c);
  switch (*j) {
    case Direction2D::D1: return q + 2.0 * (L - y) / c;
    case Direction2D::D3: return q + 2.0 * y / c;
    default: return q + (lambda * L + c) / (lambda * c);
  }
}

double clamp_density(double v, const quad::QuadResult& r, double tol, double* clamp) {
  if (!r.ok()) {
    std::ostringstream os;
    os << "density quadrature did not converge (" << quad::to_string(r.status)
       << ", err " << r.err_estimate << ", evals " << r.evals << ")";
    throw Error(Errc::QuadratureFailure, os.str());
  }
  if (v >= 0.0) return v;
  const double allowed = std::max(10.0 * tol, 2.0 * r.err_estimate);
  if (-v > allowed) {
    std::ostringstream os;
    os << "density quadrature returned " << v << ", beyond the noise level " << allowed;
    throw Error(Errc::QuadratureFailure, os.str());
  }
  if (clamp) *clamp = std::max(*clamp, -v);
  return 0.0;
}

// Density at displacement s, clamped; y already validated.
double density_at(const PlanarStripProblem& prob, Direction2D j, double y, double s, double tol,
                  double* clamp) {
  const double k = prob.lambda() / prob.c();
  const double E = std::exp(-k * y);
  const quad::QuadResult r = density_quadrature(prob, j, y, s, tol);
  double v = r.value;
  if (j == Direction2D::D0) v += u0_jump(k, E, s);
  if (j == Direction2D::D2) v += u0_jump(k, E, -s);
  return clamp_density(v, r, tol, clamp);
}

}  // namespace

// ---------------------------------------------------------------------------

std::complex<double> fourier_u1(const PlanarStripProblem& prob, double alpha, double y,
                                double z) {
  validate_strip_start(prob, y);
  const TransformPair t = transforms_at_origin(prob.c(), prob.lambda(), prob.L(), alpha, y);
  return t.u1 * std::polar(1.0, alpha * z);
}

std::complex<double> fourier_u3(const PlanarStripProblem& prob, double alpha, double y,
                                double z) {
  validate_strip_start(prob, y);
  const cplx phase = std::polar(1.0, alpha * z);
  if (y == 0.0) return phase;
  const TransformPair t = transforms_at_origin(prob.c(), prob.lambda(), prob.L(), alpha, y);
  return t.u3 * phase;
}

std::complex<double> fourier_u0(const PlanarStripProblem& prob, double alpha, double y,
                                double z) {
  const double lambda = prob.lambda();
  return lambda / (2.0 * cplx(lambda, prob.c() * alpha)) *
         (fourier_u1(prob, alpha, y, z) + fourier_u3(prob, alpha, y, z));
}

std::complex<double> fourier_u2(const PlanarStripProblem& prob, double alpha, double y,
                                double z) {
  const double lambda = prob.lambda();
  return lambda / (2.0 * cplx(lambda, -prob.c() * alpha)) *
         (fourier_u1(prob, alpha, y, z) + fourier_u3(prob, alpha, y, z));
}

std::complex<double> fourier_u(const PlanarStripProblem& prob, Direction2D j, double alpha,
                               double y, double z) {
  switch (j) {
    case Direction2D::D0: return fourier_u0(prob, alpha, y, z);
    case Direction2D::D1: return fourier_u1(prob, alpha, y, z);
    case Direction2D::D2: return fourier_u2(prob, alpha, y, z);
    case Direction2D::D3: return fourier_u3(prob, alpha, y, z);
  }
  return {};
}

std::pair<std::complex<double>, std::complex<double>> residual_fourier_system(
    const PlanarStripProblem& prob, double alpha, double y, double h_step) {
  if (!(h_step > 0.0) || !(y - h_step > 0.0) || !(y + h_step < prob.L())) {
    std::ostringstream os;
    os << "stencil y = " << y << " +- " << h_step << " leaves (0, " << prob.L() << ")";
    throw Error(Errc::OutOfDomain, os.str());
  }
  const double c = prob.c(), lambda = prob.lambda();
  const double q = lambda * lambda + c * c * alpha * alpha;
  const double diag = (lambda * lambda * lambda + 2.0 * lambda * c * c * alpha * alpha) / (2.0 * c * q);
  const double off = lambda * lambda * lambda / (2.0 * c * q);

  const cplx u1 = fourier_u1(prob, alpha, y, 0.0);
  const cplx u3 = fourier_u3(prob, alpha, y, 0.0);
  const cplx du1 =
      (fourier_u1(prob, alpha, y + h_step, 0.0) - fourier_u1(prob, alpha, y - h_step, 0.0)) /
      (2.0 * h_step);
  const cplx du3 =
      (fourier_u3(prob, alpha, y + h_step, 0.0) - fourier_u3(prob, alpha, y - h_step, 0.0)) /
      (2.0 * h_step);
  return {du1 - (diag * u1 - off * u3), du3 - (off * u1 - diag * u3)};
}

StripExitProbs exit_prob_lower_strip(const PlanarStripProblem& prob, double y) {
  validate_strip_start(prob, y);
  const double c = prob.c(), lambda = prob.lambda(), L = prob.L();
  const double den = lambda * L + 2.0 * c;
  const double p1 = lambda * (L - y) / den;
  const double p3 = (2.0 * c + lambda * (L - y)) / den;
  const double p0 = (c + lambda * (L - y)) / den;
  return {p0, p1, p0, p3, p0};
}

StripMeanTimes mean_exit_time_strip(const PlanarStripProblem& prob, double y) {
  validate_strip_start(prob, y);
  const double c = prob.c(), lambda = prob.lambda(), L = prob.L();
  const double h0 = mean_time_unchecked(c, lambda, L, y, Direction2D::D0);
  return {h0, mean_time_unchecked(c, lambda, L, y, Direction2D::D1), h0,
          mean_time_unchecked(c, lambda, L, y, Direction2D::D3),
          mean_time_unchecked(c, lambda, L, y, std::nullopt)};
}

double residual_poisson_pde(const PlanarStripProblem& prob, double y,
                            std::optional<Direction2D> j) {
  require_open_strip(prob, y);
  const double c = prob.c(), lambda = prob.lambda(), L = prob.L();
  const double step = 0.25 * L;
  auto h = [&](double t) { return mean_time_unchecked(c, lambda, L, t, j); };
  const double second = (h(y + step) - 2.0 * h(y) + h(y - step)) / (step * step);
  return second + 2.0 * lambda / (c * c);
}

double singular_mass(const PlanarStripProblem& prob, double y) {
  validate_strip_start(prob, y);
  return std::exp(-prob.lambda() * y / prob.c());
}

quad::QuadResult density_quadrature(const PlanarStripProblem& prob, Direction2D j, double y,
                                    double s, double tol) {
  require_open_strip(prob, y);
  const double k = prob.lambda() / prob.c();
  const Amplitudes amp{k, prob.L(), y, std::exp(-k * y)};
  quad::FourierWIntegrand g;
  switch (j) {
    case Direction2D::D1:
      g.cos_amp = [&amp](double w, double cw) { return amp.u1(w, cw); };
      g.freq = k * s;
      break;
    case Direction2D::D3:
      g.cos_amp = [&amp](double w, double cw) { return amp.u3(w, cw); };
      g.freq = k * s;
      break;
    case Direction2D::D0:
    case Direction2D::D2:
      g.cos_amp = [&amp](double w, double cw) { return amp.u0_cos(w, cw); };
      g.sin_amp = [&amp](double w, double cw) { return amp.u0_sin(w, cw); };
      g.freq = k * (j == Direction2D::D0 ? s : -s);
      break;
  }
  return quad::integrate_w_fourier(g, tol);
}

double density_u1(const PlanarStripProblem& prob, double x, double y, double z, double tol) {
  return density(prob, Direction2D::D1, x, y, z, tol);
}

double density_u3_continuous(const PlanarStripProblem& prob, double x, double y, double z,
                             double tol) {
  return density(prob, Direction2D::D3, x, y, z, tol);
}

double density_u0(const PlanarStripProblem& prob, double x, double y, double z, double tol) {
  return density(prob, Direction2D::D0, x, y, z, tol);
}

double density_u2(const PlanarStripProblem& prob, double x, double y, double z, double tol) {
  return density(prob, Direction2D::D2, x, y, z, tol);
}

double density(const PlanarStripProblem& prob, Direction2D j, double x, double y, double z,
               double tol) {
  require_open_strip(prob, y);
  return density_at(prob, j, y, z - x, tol, nullptr);
}

DensityProfile density_profile(const PlanarStripProblem& prob, Direction2D j, double x,
                               double y, const std::vector<double>& z_grid, double tol) {
  require_open_strip(prob, y);
  for (std::size_t i = 1; i < z_grid.size(); ++i) {
    if (!(z_grid[i] > z_grid[i - 1]))
      throw Error(Errc::InvalidParameter, "z grid must be strictly increasing");
  }
  DensityProfile out;
  out.z_grid = z_grid;
  out.values.assign(z_grid.size(), 0.0);
  out.j = j;
  out.x = x;
  out.y = y;
  out.singular_mass = j == Direction2D::D3 ? singular_mass(prob, y) : 0.0;
  std::vector<double> clamps(z_grid.size(), 0.0);
  parallel_for(z_grid.size(), [&](std::size_t i) {
    out.values[i] = density_at(prob, j, y, z_grid[i] - x, tol, &clamps[i]);
  });
  out.max_clamp = *std::max_element(clamps.begin(), clamps.end());
  return out;
}

double integration_half_width(const PlanarStripProblem& prob, double y) {
  const double c = prob.c(), lambda = prob.lambda();
  const double h = mean_exit_time_strip(prob, y).h;
  return 50.0 * std::max(c / lambda, c * h);
}

DensityIntegral integrate_density(const PlanarStripProblem& prob, double x, double y,
                                  Direction2D j, std::size_t nodes, double tol) {
  require_open_strip(prob, y);
  if (nodes < 3 || nodes % 2 == 0)
    throw Error(Errc::InvalidParameter, "node count must be odd and at least 3");
  const double W = integration_half_width(prob, y);
  const std::size_t mid = nodes / 2;
  const double step = W / static_cast<double>(mid);
  std::vector<double> values(nodes, 0.0);
  std::vector<double> clamps(nodes, 0.0);
  parallel_for(nodes, [&](std::size_t i) {
    const double z = x + (static_cast<double>(i) - static_cast<double>(mid)) * step;
    values[i] = density_at(prob, j, y, z - x, tol, &clamps[i]);
  });
  double value = quad::trapezoid_samples(values.data(), nodes, step);
  if (j == Direction2D::D3) {
    const double mass = singular_mass(prob, y);
    value = mass + (1.0 - mass) * value;
  }
  return {value, W, nodes, *std::max_element(clamps.begin(), clamps.end())};
}

double pj_by_density_integration(const PlanarStripProblem& prob, double x, double y,
                                 Direction2D j) {
  return integrate_density(prob, x, y, j).value;
}

}  // namespace telex::strip
