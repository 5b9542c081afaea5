#pragma once

#include <Eigen/Core>
#include <cmath>

#include "telex/error.hpp"

// Closed-form exponentials for the two families of 2x2 generators that show
// up in the exit problems, and variation of constants on top of them:
//   dV/dx = A V + g.
// Both families satisfy A^2 = r A with r = trace(A) (r = 0: nilpotent), so
//   e^{A t} = I + phi(r, t) A,            phi = (e^{r t} - 1) / r,
//   int_0^t e^{A s} ds = t I + psi(r, t) A, psi = (e^{r t} - 1 - r t) / r^2.

namespace telex::linops2 {

template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Mat2d = Mat2<double>;
using Vec2d = Vec2<double>;

inline constexpr double kStructureTol = 1e-12;
inline constexpr double kSeriesSwitch = 1e-8;

namespace detail {

template <typename Scalar>
Scalar max_abs(const Mat2<Scalar>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Scalar>
void require_finite(const Mat2<Scalar>& A) {
  if (!A.allFinite()) throw Error(Errc::InvalidParameter, "matrix has non-finite entries");
}

template <typename Scalar>
bool recurrence_holds(const Mat2<Scalar>& A, Scalar r) {
  const Scalar scale = max_abs(A) * max_abs(A);
  const Mat2<Scalar> defect = A * A - r * A;
  return max_abs(defect) <= Scalar(kStructureTol) * scale;
}

}  // namespace detail

/// (e^{r t} - 1) / r, with the r -> 0 limit t.
template <typename Scalar>
Scalar phi(Scalar r, Scalar t) {
  using std::abs;
  using std::expm1;
  const Scalar z = r * t;
  if (abs(z) < Scalar(kSeriesSwitch)) return t * (Scalar(1) + z / Scalar(2) + z * z / Scalar(6));
  return expm1(z) / r;
}

/// (e^{r t} - 1 - r t) / r^2, with the r -> 0 limit t^2 / 2.
template <typename Scalar>
Scalar psi(Scalar r, Scalar t) {
  using std::abs;
  using std::expm1;
  const Scalar z = r * t;
  if (abs(z) < Scalar(0.5)) {
    // t^2 * sum_k z^k / (k + 2)!
    Scalar term = Scalar(0.5);
    Scalar sum = term;
    for (int k = 1; k < 30; ++k) {
      term *= z / Scalar(k + 2);
      sum += term;
    }
    return t * t * sum;
  }
  return (expm1(z) - z) / (r * r);
}

/// e^{A x} = I + A x for A with A^2 = 0.
template <typename Scalar>
Mat2<Scalar> mat_exp_nilpotent(const Mat2<Scalar>& A, Scalar x) {
  detail::require_finite(A);
  if (!detail::recurrence_holds(A, Scalar(0)))
    throw Error(Errc::NotNilpotent, "A * A is not the zero matrix");
  return Mat2<Scalar>::Identity() + A * x;
}

/// Recurrence scalar r with A^2 = r A; throws NotRank1Recurrent otherwise.
template <typename Scalar>
Scalar recurrence_scalar(const Mat2<Scalar>& A) {
  detail::require_finite(A);
  const Scalar r = A.trace();
  if (!detail::recurrence_holds(A, r))
    throw Error(Errc::NotRank1Recurrent, "A * A != trace(A) * A");
  return r;
}

template <typename Scalar>
Mat2<Scalar> mat_exp_rank1_recurrent(const Mat2<Scalar>& A, Scalar x) {
  const Scalar r = recurrence_scalar(A);
  if (r == Scalar(0)) return mat_exp_nilpotent(A, x);
  return Mat2<Scalar>::Identity() + phi(r, x) * A;
}

/// Solution of dV/dx = A V + g with V(x0) = K, by variation of constants:
///   V(x) = e^{A (x - x0)} K + (int_{x0}^{x} e^{A (x - s)} ds) g.
template <typename Scalar>
Vec2<Scalar> solve_inhomogeneous(const Mat2<Scalar>& A, const Vec2<Scalar>& g, Scalar x0,
                                 const Vec2<Scalar>& K, Scalar x) {
  const Scalar r = recurrence_scalar(A);
  const Scalar t = x - x0;
  const Mat2<Scalar> propagator = Mat2<Scalar>::Identity() + phi(r, t) * A;
  const Mat2<Scalar> integral = t * Mat2<Scalar>::Identity() + psi(r, t) * A;
  return propagator * K + integral * g;
}

}  // namespace telex::linops2
