#pragma once

#include <Eigen/Core>
#include <utility>

#include "telex/core.hpp"

namespace telex {

/// Probabilities of leaving [a, b] through a given endpoint, conditional on
/// the initial direction (u0: D0, u1: D1) and unconditional (u).
struct ExitProbTriple {
  double u0;
  double u1;
  double u;
};

/// Mean exit times, conditional on the initial direction and unconditional.
struct MeanExitTriple {
  double h0;
  double h1;
  double h;
};

/// Central-difference residuals of a first-order 2x2 system (one entry per
/// equation) and of the scalar second-order equation satisfied by the
/// unconditional function.
struct SystemResidual {
  Eigen::Vector2d first_order;
  double second_order;
};

inline constexpr double kDefaultFdStep = 1e-5;

// Symmetric telegraph process --------------------------------------------

ExitProbTriple exit_prob_upper(const TelegraphParams& p, const Interval& iv, double x);

/// Probabilities of leaving through a; complements of exit_prob_upper.
ExitProbTriple exit_prob_lower(const TelegraphParams& p, const Interval& iv, double x);

MeanExitTriple mean_exit_time(const TelegraphParams& p, const Interval& iv, double x);

/// Residuals of du_j/dx = -(lambda/c)(u1 - u0) and of u'' = 0. The
/// second-order residual uses a step of ten times h_step.
SystemResidual residual_u_system(const TelegraphParams& p, const Interval& iv, double x,
                                 double h_step = kDefaultFdStep);

/// Residuals of dh_j/dx = -(lambda/c)(h1 - h0) -+ 1/c and of
/// h'' = -2 lambda / c^2.
SystemResidual residual_h_system(const TelegraphParams& p, const Interval& iv, double x,
                                 double h_step = kDefaultFdStep);

// Telegraph process with drift --------------------------------------------

/// r = lambda0/c0 - lambda1/c1 and denom = lambda0 c1 - lambda1 c0 = r c0 c1.
struct DriftRate {
  double r;
  double denom;
};

DriftRate drift_rate(const DriftTelegraphParams& p) noexcept;

/// Defined for every admissible parameter set, including r = 0, where it
/// coincides with the symmetric formulas evaluated at (c0, lambda0).
ExitProbTriple drift_exit_prob_upper(const DriftTelegraphParams& p, const Interval& iv,
                                     double x);

/// Throws DegenerateSymmetric when |lambda0 c1 - lambda1 c0| < 1e-7 lambda0 c1.
MeanExitTriple drift_mean_exit_time(const DriftTelegraphParams& p, const Interval& iv,
                                    double x);

struct DriftResiduals {
  SystemResidual u;
  SystemResidual h;
};

DriftResiduals residual_drift_systems(const DriftTelegraphParams& p, const Interval& iv,
                                      double x, double h_step = kDefaultFdStep);

/// Parameters (c0, c1) = (scale, scale + 2 mu), lambda_j = c_j^2. They satisfy
/// lambda_j / c_j^2 = 1 and (lambda1/c1 - lambda0/c0) / 2 = mu exactly.
DriftTelegraphParams hydrodynamic_drift_params(double mu, double scale);

/// (u under the drift formulas, Brownian-with-drift reference) at x.
std::pair<double, double> hydrodynamic_drift_limit_check(double mu, double scale,
                                                         const Interval& iv, double x);

}  // namespace telex
