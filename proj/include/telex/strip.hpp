#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "telex/core.hpp"
#include "telex/quadrature.hpp"

// Orthogonal planar motion in the strip 0 <= y <= L, exit through the lower
// boundary. Start (x, y), initial direction D_j; s = z - x is the horizontal
// displacement of the exit point. Everything is invariant under horizontal
// translation, so the exit-point densities depend on (y, s) only.

namespace telex::strip {

struct StripExitProbs {
  double p0, p1, p2, p3, p;
};

struct StripMeanTimes {
  double h0, h1, h2, h3, h;
};

/// Exit-point density u_j(x, y; z) tabulated on z_grid. For j = D3 the law
/// has an atom of size singular_mass at z = x and `values` holds the
/// continuous part u3*, normalised so that
///   law = singular_mass * delta(z - x) + (1 - singular_mass) * u3*.
struct DensityProfile {
  std::vector<double> z_grid;
  std::vector<double> values;
  double singular_mass = 0.0;
  Direction2D j = Direction2D::D0;
  double x = 0.0;
  double y = 0.0;
  double max_clamp = 0.0;  // largest negative quadrature value reset to 0
};

inline constexpr double kDensityTol = 1e-8;

// Fourier transforms over the starting abscissa -------------------------

std::complex<double> fourier_u(const PlanarStripProblem& prob, Direction2D j, double alpha,
                               double y, double z);
std::complex<double> fourier_u0(const PlanarStripProblem& prob, double alpha, double y, double z);
std::complex<double> fourier_u1(const PlanarStripProblem& prob, double alpha, double y, double z);
std::complex<double> fourier_u2(const PlanarStripProblem& prob, double alpha, double y, double z);
std::complex<double> fourier_u3(const PlanarStripProblem& prob, double alpha, double y, double z);

/// Central-difference residuals (step h_step in y) of the 2x2 first-order
/// system in y satisfied by the transforms of u1 and u3, at z = 0.
std::pair<std::complex<double>, std::complex<double>> residual_fourier_system(
    const PlanarStripProblem& prob, double alpha, double y, double h_step);

// Exit probabilities and mean exit times ----------------------------------

StripExitProbs exit_prob_lower_strip(const PlanarStripProblem& prob, double y);
StripMeanTimes mean_exit_time_strip(const PlanarStripProblem& prob, double y);

/// d^2/dy^2 of the mean exit time (unconditional, or of h_j when j is given)
/// plus 2 lambda / c^2. The mean exit times are quadratics in y, so the
/// second difference with step L/4 is exact up to rounding.
double residual_poisson_pde(const PlanarStripProblem& prob, double y,
                            std::optional<Direction2D> j = std::nullopt);

// Exit-point densities ------------------------------------------------------

/// Atom e^{-lambda y / c} of the D3 law at z = x.
double singular_mass(const PlanarStripProblem& prob, double y);

double density_u0(const PlanarStripProblem& prob, double x, double y, double z,
                  double tol = kDensityTol);
double density_u1(const PlanarStripProblem& prob, double x, double y, double z,
                  double tol = kDensityTol);
double density_u2(const PlanarStripProblem& prob, double x, double y, double z,
                  double tol = kDensityTol);
/// Continuous part u3*; it integrates to (p3 - mass) / (1 - mass).
double density_u3_continuous(const PlanarStripProblem& prob, double x, double y, double z,
                             double tol = kDensityTol);

/// Dispatch on j; for D3 returns the continuous part.
double density(const PlanarStripProblem& prob, Direction2D j, double x, double y, double z,
               double tol = kDensityTol);

/// Raw quadrature for the density at displacement s (no clamping).
quad::QuadResult density_quadrature(const PlanarStripProblem& prob, Direction2D j, double y,
                                    double s, double tol = kDensityTol);

/// Densities on a grid; grid points are evaluated in parallel.
DensityProfile density_profile(const PlanarStripProblem& prob, Direction2D j, double x,
                               double y, const std::vector<double>& z_grid,
                               double tol = kDensityTol);

/// Half-width W = 50 max(c / lambda, c h(y)) of the z-window used to
/// integrate the densities.
double integration_half_width(const PlanarStripProblem& prob, double y);

struct DensityIntegral {
  double value;             // estimate of p_j (atom included for D3)
  double half_width;        // W
  std::size_t nodes;
  double max_clamp;
};

inline constexpr std::size_t kDefaultIntegrationNodes = 2001;
inline constexpr double kIntegrationTol = 1e-7;

/// p_j from the density: trapezoid over [x - W, x + W] on `nodes` points (odd,
/// so that z = x is a node), plus the atom for D3.
DensityIntegral integrate_density(const PlanarStripProblem& prob, double x, double y,
                                  Direction2D j, std::size_t nodes = kDefaultIntegrationNodes,
                                  double tol = kIntegrationTol);

double pj_by_density_integration(const PlanarStripProblem& prob, double x, double y,
                                 Direction2D j);

}  // namespace telex::strip
