#pragma once

#include <cstdint>

#include "telex/error.hpp"

namespace telex {

/// Speed c and switching intensity lambda of the symmetric telegraph process.
/// lambda == 0 is admitted and describes a motion that never turns.
class TelegraphParams {
 public:
  TelegraphParams(double c, double lambda);

  double c() const noexcept { return c_; }
  double lambda() const noexcept { return lambda_; }

 private:
  double c_;
  double lambda_;
};

/// Direction-dependent speeds and rates: (c0, lambda0) while moving right,
/// (c1, lambda1) while moving left. All four must be strictly positive.
class DriftTelegraphParams {
 public:
  DriftTelegraphParams(double c0, double c1, double lambda0, double lambda1);

  /// The symmetric process seen as a drift process with equal halves.
  explicit DriftTelegraphParams(const TelegraphParams& p);

  double c0() const noexcept { return c0_; }
  double c1() const noexcept { return c1_; }
  double lambda0() const noexcept { return lambda0_; }
  double lambda1() const noexcept { return lambda1_; }

 private:
  double c0_;
  double c1_;
  double lambda0_;
  double lambda1_;
};

class Interval {
 public:
  Interval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }
  double midpoint() const noexcept { return 0.5 * (a_ + b_); }

 private:
  double a_;
  double b_;
};

enum class Direction1D : std::uint8_t { D0 = 0, D1 = 1 };

/// D_j points along (cos(pi j / 2), sin(pi j / 2)).
enum class Direction2D : std::uint8_t { D0 = 0, D1 = 1, D2 = 2, D3 = 3 };

constexpr Direction1D reversed(Direction1D d) noexcept {
  return d == Direction1D::D0 ? Direction1D::D1 : Direction1D::D0;
}

constexpr Direction2D rotated_ccw(Direction2D d) noexcept {
  return static_cast<Direction2D>((static_cast<unsigned>(d) + 1u) % 4u);
}

constexpr Direction2D rotated_cw(Direction2D d) noexcept {
  return static_cast<Direction2D>((static_cast<unsigned>(d) + 3u) % 4u);
}

constexpr int index(Direction2D d) noexcept { return static_cast<int>(d); }
constexpr int index(Direction1D d) noexcept { return static_cast<int>(d); }

/// Orthogonal planar motion in the strip 0 <= y <= L. Requires lambda > 0.
class PlanarStripProblem {
 public:
  PlanarStripProblem(TelegraphParams params, double L);

  const TelegraphParams& params() const noexcept { return params_; }
  double c() const noexcept { return params_.c(); }
  double lambda() const noexcept { return params_.lambda(); }
  double L() const noexcept { return L_; }

 private:
  TelegraphParams params_;
  double L_;
};

void validate_interval_start(const Interval& iv, double x);
void validate_strip_start(const PlanarStripProblem& prob, double y);

}  // namespace telex
