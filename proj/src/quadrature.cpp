#include "telex/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "telex/error.hpp"

namespace telex::quad {

const char* to_string(QuadStatus s) noexcept {
  switch (s) {
    case QuadStatus::Converged: return "Converged";
    case QuadStatus::BudgetExhausted: return "BudgetExhausted";
    case QuadStatus::NonConvergentTail: return "NonConvergentTail";
  }
  return "?";
}

namespace {

// Kronrod 15-point abscissae (non-negative half) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk15(const RealFn& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kron += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  kron *= half;
  gauss *= half;
  double err = std::abs(kron - gauss);
  if (!std::isfinite(kron)) err = std::numeric_limits<double>::infinity();
  return {a, b, kron, err};
}

constexpr std::size_t kGkEvals = 15;

// Moments int_{-h}^{h} u^k e^{i w u} du, k = 0, 1, 2.
void filon_moments(double omega, double h, std::complex<double> m[3]) {
  const double z = omega * h;
  if (std::abs(z) < 1.0) {
    const std::complex<double> iz(0.0, z);
    for (int k = 0; k < 3; ++k) {
      std::complex<double> term(1.0, 0.0);  // (iz)^n / n!
      std::complex<double> sum(0.0, 0.0);
      for (int n = 0; n < 30; ++n) {
        if (n > 0) term *= iz / double(n);
        if ((k + n) % 2 == 0) sum += term * (2.0 / double(k + n + 1));
      }
      m[k] = sum * std::pow(h, k + 1);
    }
    return;
  }
  const double s = std::sin(z), c = std::cos(z);
  const double w = omega;
  m[0] = 2.0 * s / w;
  m[1] = std::complex<double>(0.0, 2.0 * (s / (w * w) - h * c / w));
  m[2] = 2.0 * (h * h * s / w + 2.0 * h * c / (w * w) - 2.0 * s / (w * w * w));
}

// Composite quadratic Filon rule for int_{lo}^{hi} Re[amp(t) e^{i omega t}] dt
// on `panels` double panels.
template <typename Amp>
double filon_composite(const Amp& amp, double omega, double lo, double hi, int panels) {
  const double h = (hi - lo) / (2.0 * panels);
  std::complex<double> mom[3];
  filon_moments(omega, h, mom);
  double total = 0.0;
  std::complex<double> left = amp(lo);
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (2 * p + 1) * h;
    const std::complex<double> centre = amp(mid);
    const std::complex<double> right = amp(lo + (2 * p + 2) * h);
    const std::complex<double> slope = (right - left) / (2.0 * h);
    const std::complex<double> curv = (right - 2.0 * centre + left) / (2.0 * h * h);
    const std::complex<double> phase = std::polar(1.0, omega * mid);
    total += std::real(phase * (centre * mom[0] + slope * mom[1] + curv * mom[2]));
    left = right;
  }
  return total;
}

// Composite Filon on [lo, hi], doubling the panel count until three successive
// values agree to tol. A single agreement can be an alias: when 2 h omega is
// near a multiple of 2 pi the coarse rule samples every panel at the same phase.
template <typename Amp>
QuadResult filon_adaptive(const Amp& amp, double omega, double lo, double hi, double tol,
                          std::size_t budget, int min_panels) {
  QuadResult r;
  int panels = std::max(4, min_panels);
  double prev = filon_composite(amp, omega, lo, hi, panels);
  r.evals = 2 * panels + 1;
  int agreed = 0;
  for (;;) {
    panels *= 2;
    if (r.evals + 2 * static_cast<std::size_t>(panels) + 1 > budget) {
      r.value = prev;
      r.err_estimate = std::numeric_limits<double>::infinity();
      r.status = QuadStatus::BudgetExhausted;
      return r;
    }
    const double next = filon_composite(amp, omega, lo, hi, panels);
    r.evals += 2 * static_cast<std::size_t>(panels) + 1;
    const double diff = std::abs(next - prev);
    prev = next;
    agreed = diff < tol ? agreed + 1 : 0;
    if (agreed == 2) {
      r.value = next;
      r.err_estimate = diff;
      return r;
    }
  }
}

// Shared main-part + halving-tail driver. `piece` integrates the theta-range
// [lo, hi] to the given tolerance with the given remaining budget.
template <typename Main, typename Piece>
QuadResult halving_scheme(const Main& main, const Piece& piece, double tol,
                          std::size_t budget, double delta) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  QuadResult out = main(half_pi - delta, 0.5 * tol, budget);
  if (out.status != QuadStatus::Converged) return out;

  int small_run = 0;
  double last_piece = 0.0;
  for (int halving = 0; halving < kMaxTailHalvings; ++halving) {
    if (out.evals >= budget) {
      out.status = QuadStatus::BudgetExhausted;
      return out;
    }
    const QuadResult p = piece(half_pi - delta, half_pi - 0.5 * delta, 0.125 * tol,
                               budget - out.evals);
    out.value += p.value;
    out.err_estimate += p.err_estimate;
    out.evals += p.evals;
    if (p.status != QuadStatus::Converged) {
      out.status = p.status;
      return out;
    }
    last_piece = p.value;
    small_run = std::abs(p.value) < tol ? small_run + 1 : 0;
    if (small_run == 2) {
      // what is left beyond pi/2 - delta/2 is of the size of the last piece
      out.err_estimate += std::abs(last_piece);
      return out;
    }
    delta *= 0.5;
  }
  out.status = QuadStatus::NonConvergentTail;
  return out;
}

}  // namespace

QuadResult integrate_adaptive(const RealFn& f, double a, double b, double tol,
                              std::size_t budget) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b) || !(tol > 0.0)) {
    throw Error(Errc::InvalidParameter, "integrate_adaptive needs finite a < b and tol > 0");
  }
  QuadResult res;
  if (budget < kGkEvals) {
    res.status = QuadStatus::BudgetExhausted;
    return res;
  }
  std::priority_queue<Segment> heap;
  heap.push(gk15(f, a, b));
  res.evals = kGkEvals;
  double err = heap.top().err;
  double frozen_value = 0.0;  // segments too narrow to split further
  double frozen_err = 0.0;
  const double min_width = 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(a), std::abs(b));

  while (err > tol && !heap.empty()) {
    if (res.evals + 2 * kGkEvals > budget) {
      res.status = QuadStatus::BudgetExhausted;
      break;
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a <= min_width || mid <= worst.a || mid >= worst.b) {
      frozen_value += worst.value;
      frozen_err += worst.err;
      continue;
    }
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    res.evals += 2 * kGkEvals;
    heap.push(left);
    heap.push(right);
    err += left.err + right.err - worst.err;
  }
  // Re-sum from scratch; err above accumulated rounding from the running updates.
  double v = frozen_value;
  double e = frozen_err;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().err;
    heap.pop();
  }
  res.value = v;
  res.err_estimate = e;
  if (res.status == QuadStatus::Converged && !(e <= tol)) res.status = QuadStatus::BudgetExhausted;
  if (!std::isfinite(v)) res.status = QuadStatus::BudgetExhausted;
  return res;
}

double integrate_trapezoid(const RealFn& f, double a, double b, std::size_t n) {
  if (n < 2) throw Error(Errc::InvalidParameter, "trapezoid rule needs n >= 2 nodes");
  const double h = (b - a) / static_cast<double>(n - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i + 1 < n; ++i) sum += f(a + static_cast<double>(i) * h);
  return sum * h;
}

double trapezoid_samples(const double* values, std::size_t n, double h) {
  if (n < 2) throw Error(Errc::InvalidParameter, "trapezoid rule needs n >= 2 nodes");
  double sum = 0.5 * (values[0] + values[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += values[i];
  return sum * h;
}

QuadResult integrate_w_singular_oscillatory(const WFn& g, double tol, std::size_t budget) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidParameter, "tol must be positive");
  const RealFn in_theta = [&g](double th) {
    const double cw = std::cos(th);
    return g(std::sin(th), cw) * cw;
  };
  auto adaptive = [&in_theta](double lo, double hi, double t, std::size_t b) {
    return integrate_adaptive(in_theta, lo, hi, t, b);
  };
  auto main = [&adaptive](double hi, double t, std::size_t b) { return adaptive(0.0, hi, t, b); };
  // an integrable (1 - w^2)^{-1/2} endpoint leaves a tail of order delta, so
  // start close enough that the halvings reach tol
  const double delta0 = std::min(kInitialTailGap, std::sqrt(tol));
  return halving_scheme(main, adaptive, tol, budget, delta0);
}

QuadResult integrate_w_singular_oscillatory(const RealFn& g, double tol, std::size_t budget) {
  return integrate_w_singular_oscillatory(WFn([&g](double w, double) { return g(w); }), tol,
                                          budget);
}

QuadResult integrate_w_fourier(const FourierWIntegrand& g, double tol, std::size_t budget) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidParameter, "tol must be positive");
  if (!g.cos_amp) throw Error(Errc::InvalidParameter, "cos_amp is required");
  const double omega = g.freq;
  const bool has_sin = static_cast<bool>(g.sin_amp);

  // In t = tan(theta): dw = cw^3 dt, and the integrand is
  // Re[(cos_amp - i sin_amp) cw^3 e^{i omega t}].
  auto amp = [&](double t) {
    const double cw = 1.0 / std::sqrt(1.0 + t * t);
    const double w = t * cw;
    const double jac = cw * cw * cw;
    const double re = g.cos_amp(w, cw) * jac;
    const double im = has_sin ? -g.sin_amp(w, cw) * jac : 0.0;
    return std::complex<double>(re, im);
  };
  auto t_of = [](double theta) { return 1.0 / std::tan(std::numbers::pi / 2.0 - theta); };

  // Main part [0, cot(delta0)] on segments that double in length, so each one
  // sees an amplitude varying on its own scale.
  auto main = [&](double th_hi, double t_tol, std::size_t b) {
    const double t_hi = t_of(th_hi);
    std::vector<double> cuts{0.0, 0.5};
    while (2.0 * cuts.back() < t_hi) cuts.push_back(2.0 * cuts.back());
    cuts.push_back(t_hi);
    const double seg_tol = t_tol / static_cast<double>(cuts.size() - 1);
    QuadResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      // at least one double panel per half period of the phase
      const double span = std::abs(omega) * (cuts[i + 1] - cuts[i]) / std::numbers::pi;
      const int min_panels = static_cast<int>(std::min(span, 1e6)) + 1;
      const QuadResult r = filon_adaptive(amp, omega, cuts[i], cuts[i + 1], seg_tol,
                                          b > out.evals ? b - out.evals : 0, min_panels);
      out.value += r.value;
      out.err_estimate += r.err_estimate;
      out.evals += r.evals;
      if (!r.ok()) {
        out.status = r.status;
        return out;
      }
    }
    return out;
  };
  auto piece = [&](double th_lo, double th_hi, double t_tol, std::size_t b) {
    return filon_adaptive(amp, omega, t_of(th_lo), t_of(th_hi), t_tol, b, 8);
  };
  return halving_scheme(main, piece, tol, budget, kInitialTailGap);
}

}  // namespace telex::quad
