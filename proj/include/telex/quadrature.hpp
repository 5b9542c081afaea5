#pragma once

#include <cstddef>
#include <functional>

#include "telex/error.hpp"

namespace telex::quad {

enum class QuadStatus { Converged, BudgetExhausted, NonConvergentTail };

const char* to_string(QuadStatus s) noexcept;

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::size_t evals = 0;
  QuadStatus status = QuadStatus::Converged;

  bool ok() const noexcept { return status == QuadStatus::Converged; }
};

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// Initial truncation distance from theta = pi/2 in the w = sin(theta) scheme.
inline constexpr double kInitialTailGap = 1e-2 * 1.5707963267948966;
inline constexpr int kMaxTailHalvings = 20;

using RealFn = std::function<double(double)>;

/// w-integrand evaluated with both w and sqrt(1 - w^2), so factors like
/// (1 - w^2)^{-3/2} keep full precision near w = 1.
using WFn = std::function<double(double w, double cw)>;

/// Globally adaptive Gauss-Kronrod (7/15) bisection. Stops when the summed
/// error estimate is below tol (absolute).
QuadResult integrate_adaptive(const RealFn& f, double a, double b, double tol,
                              std::size_t budget = kDefaultBudget);

/// Composite trapezoid on n equally spaced nodes (n >= 2).
double integrate_trapezoid(const RealFn& f, double a, double b, std::size_t n);

/// Trapezoid over tabulated values at equally spaced nodes with spacing h.
double trapezoid_samples(const double* values, std::size_t n, double h);

/// Integral over (0, 1) of an integrand with an integrable singularity at
/// w = 1. Substitutes w = sin(theta), integrates [0, pi/2 - delta0]
/// adaptively, then adds pieces [pi/2 - delta, pi/2 - delta/2] while halving
/// delta until two successive pieces are below tol.
QuadResult integrate_w_singular_oscillatory(const WFn& g, double tol,
                                            std::size_t budget = kDefaultBudget);
QuadResult integrate_w_singular_oscillatory(const RealFn& g, double tol,
                                            std::size_t budget = kDefaultBudget);

/// Integrand on (0, 1) of the form
///   cos_amp(w) cos(freq t) + sin_amp(w) sin(freq t),  t = w / sqrt(1 - w^2).
/// The phase is linear in t = tan(theta) and oscillates without bound as
/// w -> 1, where Gauss-Kronrod error estimates alias. Both the main part and
/// the tail pieces are therefore integrated in t with a composite quadratic
/// Filon rule (exact for the oscillatory factor), doubling panels until
/// successive values agree. The truncation points and the halving loop are
/// those of integrate_w_singular_oscillatory.
struct FourierWIntegrand {
  WFn cos_amp;
  WFn sin_amp;  // may be empty
  double freq = 0.0;
};

QuadResult integrate_w_fourier(const FourierWIntegrand& g, double tol,
                               std::size_t budget = kDefaultBudget);

}  // namespace telex::quad
