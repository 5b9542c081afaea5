#pragma once

// Reference computations used only by the tests. None of them goes through
// the closed forms under test: the boundary-value oracles integrate the
// backward equations of the processes with RK4 and linear shooting.

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "telex/core.hpp"
#include "telex/strip.hpp"

namespace oracle {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/// e^{A x} by a 30-term Taylor series.
inline Mat2 expm_series(const Mat2& A, double x, int terms = 30) {
  Mat2 sum = Mat2::Identity();
  Mat2 term = Mat2::Identity();
  for (int k = 1; k < terms; ++k) {
    term = term * A * (x / k);
    sum += term;
  }
  return sum;
}

/// Classical RK4 for dV/dx = f(x, V) from x0 to x1 with n steps.
inline Vec2 rk4(const std::function<Vec2(double, const Vec2&)>& f, double x0, Vec2 v, double x1,
                int n) {
  const double h = (x1 - x0) / n;
  double x = x0;
  for (int i = 0; i < n; ++i) {
    const Vec2 k1 = f(x, v);
    const Vec2 k2 = f(x + h / 2, v + h / 2 * k1);
    const Vec2 k3 = f(x + h / 2, v + h / 2 * k2);
    const Vec2 k4 = f(x + h, v + h * k3);
    v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    x += h;
  }
  return v;
}

/// Linear two-point problem dV/dx = A V + g on [a, b] with V_1(a) = alpha1
/// and V_0(b) = beta0 (the direction-split endpoint conditions of the exit
/// problems). Solved by shooting on the unknown V_0(a); returns V(x).
inline Vec2 shoot(const Mat2& A, const Vec2& g, double a, double b, double alpha1, double beta0,
                  double x, int steps = 20000) {
  auto f = [&](double, const Vec2& v) -> Vec2 { return A * v + g; };
  const Vec2 s0 = rk4(f, a, Vec2(0.0, alpha1), b, steps);
  const Vec2 s1 = rk4(f, a, Vec2(1.0, alpha1), b, steps);
  const double start = (beta0 - s0(0)) / (s1(0) - s0(0));
  if (x == a) return Vec2(start, alpha1);
  const int n = std::max(1, static_cast<int>(steps * (x - a) / (b - a)));
  return rk4(f, a, Vec2(start, alpha1), x, n);
}

// Backward equations. Rightward: speed c0, rate l0; leftward: c1, l1.
//   exit through b:  c0 u0' = l0 (u0 - u1),  c1 u1' = l1 (u0 - u1)
//   mean exit time:  c0 h0' = l0 (h0 - h1) - 1,  c1 h1' = l1 (h0 - h1) + 1
// with u0(b) = 1, u1(a) = 0, h0(b) = 0, h1(a) = 0.

inline Vec2 interval_u(double c0, double c1, double l0, double l1, double a, double b,
                       double x) {
  Mat2 A;
  A << l0 / c0, -l0 / c0, l1 / c1, -l1 / c1;
  return shoot(A, Vec2::Zero(), a, b, 0.0, 1.0, x);
}

inline Vec2 interval_h(double c0, double c1, double l0, double l1, double a, double b,
                       double x) {
  Mat2 A;
  A << l0 / c0, -l0 / c0, l1 / c1, -l1 / c1;
  return shoot(A, Vec2(-1.0 / c0, 1.0 / c1), a, b, 0.0, 0.0, x);
}

// Strip, in y. Horizontal starts turn to D1 or D3 at the first switch, so
// p0 = p2 = (p1 + p3) / 2 and h0 = h2 = 1/lambda + (h1 + h3) / 2; then
//   c p1' = lambda (p1 - p0),  c p3' = lambda (p0 - p3),  p1(L) = 0, p3(0) = 1
//   c h1' = lambda (h1 - h0) - 1,  c h3' = lambda (h0 - h3) + 1,  h1(L) = h3(0) = 0.
// In V = (p1, p3) the conditions sit at opposite ends, so shoot from y = 0.
inline std::array<double, 4> strip_p(double c, double lambda, double L, double y) {
  const double k = lambda / c;
  Mat2 A;
  A << k / 2, -k / 2, k / 2, -k / 2;
  auto f = [&](double, const Vec2& v) -> Vec2 { return A * v; };
  const int steps = 20000;
  const Vec2 s0 = rk4(f, 0.0, Vec2(0.0, 1.0), L, steps);
  const Vec2 s1 = rk4(f, 0.0, Vec2(1.0, 1.0), L, steps);
  const double start = -s0(0) / (s1(0) - s0(0));
  const int n = std::max(1, static_cast<int>(steps * y / L));
  const Vec2 v = y == 0.0 ? Vec2(start, 1.0) : rk4(f, 0.0, Vec2(start, 1.0), y, n);
  const double p0 = 0.5 * (v(0) + v(1));
  return {p0, v(0), p0, v(1)};
}

inline std::array<double, 4> strip_h(double c, double lambda, double L, double y) {
  const double k = lambda / c;
  Mat2 A;
  A << k / 2, -k / 2, k / 2, -k / 2;
  const Vec2 g(-2.0 / c, 2.0 / c);  // the 1/lambda in h0 adds one more 1/c
  auto f = [&](double, const Vec2& v) -> Vec2 { return A * v + g; };
  const int steps = 20000;
  const Vec2 s0 = rk4(f, 0.0, Vec2(0.0, 0.0), L, steps);
  const Vec2 s1 = rk4(f, 0.0, Vec2(1.0, 0.0), L, steps);
  const double start = -s0(0) / (s1(0) - s0(0));
  const int n = std::max(1, static_cast<int>(steps * y / L));
  const Vec2 v = y == 0.0 ? Vec2(start, 0.0) : rk4(f, 0.0, Vec2(start, 0.0), y, n);
  const double h0 = 1.0 / lambda + 0.5 * (v(0) + v(1));
  return {h0, v(0), h0, v(1)};
}

/// Density by direct inversion of a transform over the starting abscissa:
/// with u~(alpha) = int e^{i alpha x} u(x; z) dx and z = 0,
///   u(s) = (1 / 2 pi) int u~(alpha) e^{i alpha s} d alpha
/// where s = z - x, truncated to |alpha| <= amax, trapezoid on n nodes.
inline double alpha_inversion(const std::function<std::complex<double>(double)>& transform,
                              double s, double amax = 1e4, int n = 1'000'001) {
  const double h = 2.0 * amax / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double alpha = -amax + i * h;
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += w * std::real(transform(alpha) * std::polar(1.0, alpha * s));
  }
  return sum * h / (2.0 * std::numbers::pi);
}

// Truncation error of the plain sum decays like 1/amax when the density has a
// kink (transform ~ alpha^{-2}); one Richardson step removes it.
inline double alpha_inversion_extrapolated(
    const std::function<std::complex<double>(double)>& transform, double s, double amax = 1e4,
    int n = 1'000'001) {
  const double coarse = alpha_inversion(transform, s, amax, n);
  const double fine = alpha_inversion(transform, s, 2.0 * amax, 2 * n - 1);
  return 2.0 * fine - coarse;
}

}  // namespace oracle
