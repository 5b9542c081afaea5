#include "telex/interval.hpp"

#include <cmath>
#include <sstream>

#include "telex/brownian.hpp"
#include "telex/linops2.hpp"

namespace telex {

namespace {

void require_interior(const Interval& iv, double x, double step) {
  if (!(step > 0.0) || !(x - step > iv.a()) || !(x + step < iv.b())) {
    std::ostringstream os;
    os << "finite-difference stencil x = " << x << " +- " << step << " leaves (" << iv.a()
       << ", " << iv.b() << ")";
    throw Error(Errc::OutOfDomain, os.str());
  }
}

// Unchecked evaluations; callers validate x.

ExitProbTriple symmetric_u(double c, double lambda, double a, double b, double x) {
  const double den = c + lambda * (b - a);
  const double u0 = (c + lambda * (x - a)) / den;
  const double u1 = lambda * (x - a) / den;
  return {u0, u1, 0.5 * (u0 + u1)};
}

MeanExitTriple symmetric_h(double c, double lambda, double a, double b, double x) {
  const double quad = lambda / (c * c) * (b - x) * (x - a);
  const double h0 = quad + (b - x) / c;
  const double h1 = quad + (x - a) / c;
  return {h0, h1, 0.5 * (h0 + h1)};
}

// Exponentials e^{r (t - s)} with the shift s chosen so every exponent over
// [a, b] is <= 0.
class ShiftedExp {
 public:
  ShiftedExp(double r, double a, double b) : r_(r), s_(r > 0.0 ? b : a) {}

  double at(double t) const { return std::exp(r_ * (t - s_)); }

  // e^{r (hi - s)} - e^{r (lo - s)} for hi >= lo, without cancellation.
  double diff(double hi, double lo) const {
    if (r_ > 0.0) return -at(hi) * std::expm1(-r_ * (hi - lo));
    return at(lo) * std::expm1(r_ * (hi - lo));
  }

 private:
  double r_;
  double s_;
};

ExitProbTriple drift_u(const DriftTelegraphParams& p, double a, double b, double x) {
  const double r = p.lambda0() / p.c0() - p.lambda1() / p.c1();
  const double l0c1 = p.lambda0() * p.c1();
  const double l1c0 = p.lambda1() * p.c0();
  double u0 = 0.0;
  double u1 = 0.0;
  if (std::abs(r) * (b - a) <= 1.0) {
    // Numerator and denominator divided by r e^{r a}; regular at r = 0.
    const double c0c1 = p.c0() * p.c1();
    const double fx = linops2::phi(r, x - a);
    const double den = l0c1 * linops2::phi(r, b - a) + c0c1;
    u0 = (l0c1 * fx + c0c1) / den;
    u1 = l1c0 * fx / den;
  } else {
    const ShiftedExp e(r, a, b);
    const double den = l0c1 * e.at(b) - l1c0 * e.at(a);
    u0 = (l0c1 * e.at(x) - l1c0 * e.at(a)) / den;
    u1 = l1c0 * e.diff(x, a) / den;
  }
  return {u0, u1, 0.5 * (u0 + u1)};
}

void require_nondegenerate(const DriftTelegraphParams& p) {
  const double denom = p.lambda0() * p.c1() - p.lambda1() * p.c0();
  if (std::abs(denom) < 1e-7 * p.lambda0() * p.c1()) {
    throw Error(Errc::DegenerateSymmetric,
                "lambda0 c1 == lambda1 c0; use the symmetric mean-exit-time formulas");
  }
}

MeanExitTriple drift_h(const DriftTelegraphParams& p, double a, double b, double x) {
  const double l0 = p.lambda0(), l1 = p.lambda1(), c0 = p.c0(), c1 = p.c1();
  const double r = l0 / c0 - l1 / c1;
  const double denom = l0 * c1 - l1 * c0;
  const double l0c1 = l0 * c1;
  const double l1c0 = l1 * c0;
  const double len = b - a;
  const ShiftedExp e(r, a, b);

  const double ea = e.at(a);
  const double den = l0c1 * e.diff(b, a) + denom * ea;
  const double k = (l0 + l1) / denom;

  // ratio first, so that it is exactly 1 at x = b and h0(b) = 0
  const double ratio = (l0c1 * e.diff(x, a) + denom * ea) / den;
  const double h0 =
      k * (x - a) - k * len * ratio + l0c1 * (c0 + c1) / denom * e.diff(b, x) / den;
  const double h1 =
      k * (x - a) - l1c0 * (c0 + c1 + (l0 + l1) * len) / denom * e.diff(x, a) / den;
  return {h0, h1, 0.5 * (h0 + h1)};
}

template <typename Eval>
double central_first(const Eval& f, double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

template <typename Eval>
double central_second(const Eval& f, double x, double step) {
  return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
}

}  // namespace

ExitProbTriple exit_prob_upper(const TelegraphParams& p, const Interval& iv, double x) {
  validate_interval_start(iv, x);
  return symmetric_u(p.c(), p.lambda(), iv.a(), iv.b(), x);
}

ExitProbTriple exit_prob_lower(const TelegraphParams& p, const Interval& iv, double x) {
  const ExitProbTriple up = exit_prob_upper(p, iv, x);
  return {1.0 - up.u0, 1.0 - up.u1, 1.0 - up.u};
}

MeanExitTriple mean_exit_time(const TelegraphParams& p, const Interval& iv, double x) {
  validate_interval_start(iv, x);
  return symmetric_h(p.c(), p.lambda(), iv.a(), iv.b(), x);
}

SystemResidual residual_u_system(const TelegraphParams& p, const Interval& iv, double x,
                                 double h_step) {
  require_interior(iv, x, 10.0 * h_step);
  const double c = p.c(), lambda = p.lambda(), a = iv.a(), b = iv.b();
  auto u = [&](double t) { return symmetric_u(c, lambda, a, b, t); };
  const ExitProbTriple here = u(x);
  const double coupling = -(lambda / c) * (here.u1 - here.u0);

  SystemResidual res;
  res.first_order[0] = central_first([&](double t) { return u(t).u0; }, x, h_step) - coupling;
  res.first_order[1] = central_first([&](double t) { return u(t).u1; }, x, h_step) - coupling;
  res.second_order = central_second([&](double t) { return u(t).u; }, x, 10.0 * h_step);
  return res;
}

SystemResidual residual_h_system(const TelegraphParams& p, const Interval& iv, double x,
                                 double h_step) {
  require_interior(iv, x, 10.0 * h_step);
  const double c = p.c(), lambda = p.lambda(), a = iv.a(), b = iv.b();
  auto h = [&](double t) { return symmetric_h(c, lambda, a, b, t); };
  const MeanExitTriple here = h(x);
  const double coupling = -(lambda / c) * (here.h1 - here.h0);

  SystemResidual res;
  res.first_order[0] =
      central_first([&](double t) { return h(t).h0; }, x, h_step) - (coupling - 1.0 / c);
  res.first_order[1] =
      central_first([&](double t) { return h(t).h1; }, x, h_step) - (coupling + 1.0 / c);
  res.second_order = central_second([&](double t) { return h(t).h; }, x, 10.0 * h_step) +
                     2.0 * lambda / (c * c);
  return res;
}

DriftRate drift_rate(const DriftTelegraphParams& p) noexcept {
  return {p.lambda0() / p.c0() - p.lambda1() / p.c1(),
          p.lambda0() * p.c1() - p.lambda1() * p.c0()};
}

ExitProbTriple drift_exit_prob_upper(const DriftTelegraphParams& p, const Interval& iv,
                                     double x) {
  validate_interval_start(iv, x);
  return drift_u(p, iv.a(), iv.b(), x);
}

MeanExitTriple drift_mean_exit_time(const DriftTelegraphParams& p, const Interval& iv,
                                    double x) {
  validate_interval_start(iv, x);
  require_nondegenerate(p);
  return drift_h(p, iv.a(), iv.b(), x);
}

DriftResiduals residual_drift_systems(const DriftTelegraphParams& p, const Interval& iv,
                                      double x, double h_step) {
  require_interior(iv, x, 10.0 * h_step);
  require_nondegenerate(p);
  const double a = iv.a(), b = iv.b();
  const double k0 = p.lambda0() / p.c0();
  const double k1 = p.lambda1() / p.c1();
  const double wide = 10.0 * h_step;

  auto u = [&](double t) { return drift_u(p, a, b, t); };
  auto h = [&](double t) { return drift_h(p, a, b, t); };

  DriftResiduals res;
  {
    const ExitProbTriple here = u(x);
    const double jump = here.u1 - here.u0;
    auto uu = [&](double t) { return u(t).u; };
    res.u.first_order[0] = central_first([&](double t) { return u(t).u0; }, x, h_step) + k0 * jump;
    res.u.first_order[1] = central_first([&](double t) { return u(t).u1; }, x, h_step) + k1 * jump;
    res.u.second_order = central_second(uu, x, wide) + (k1 - k0) * central_first(uu, x, wide);
  }
  {
    const MeanExitTriple here = h(x);
    const double jump = here.h1 - here.h0;
    auto hh = [&](double t) { return h(t).h; };
    res.h.first_order[0] = central_first([&](double t) { return h(t).h0; }, x, h_step) +
                           k0 * jump + 1.0 / p.c0();
    res.h.first_order[1] = central_first([&](double t) { return h(t).h1; }, x, h_step) +
                           k1 * jump - 1.0 / p.c1();
    res.h.second_order = central_second(hh, x, wide) + (k1 - k0) * central_first(hh, x, wide) +
                         (p.lambda0() + p.lambda1()) / (p.c0() * p.c1());
  }
  return res;
}

DriftTelegraphParams hydrodynamic_drift_params(double mu, double scale) {
  if (!std::isfinite(scale) || !(scale >= 1.0) || !std::isfinite(mu) ||
      !(std::abs(mu) <= scale / 4.0)) {
    std::ostringstream os;
    os << "need scale >= 1 and |mu| <= scale / 4, got mu = " << mu << ", scale = " << scale;
    throw Error(Errc::InvalidScale, os.str());
  }
  const double c0 = scale;
  const double c1 = scale + 2.0 * mu;
  return DriftTelegraphParams(c0, c1, c0 * c0, c1 * c1);
}

std::pair<double, double> hydrodynamic_drift_limit_check(double mu, double scale,
                                                         const Interval& iv, double x) {
  const DriftTelegraphParams p = hydrodynamic_drift_params(mu, scale);
  return {drift_exit_prob_upper(p, iv, x).u, brownian::drift_exit_prob_upper(iv, x, mu)};
}

}  // namespace telex
