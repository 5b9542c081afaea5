#include "telex/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace telex::mc {

namespace {

[[noreturn]] void diverged(std::uint64_t index) {
  std::ostringstream os;
  os << "path " << index << " exceeded " << kMaxEvents << " direction changes";
  throw Error(Errc::SimulationDiverged, os.str());
}

// Rightward: speed c0, rate l0; leftward: speed c1, rate l1.
ExitRecord run_telegraph(double c0, double c1, double l0, double l1, const Interval& iv,
                         double x0, std::optional<Direction1D> d0, std::uint64_t seed,
                         std::uint64_t index) {
  validate_interval_start(iv, x0);
  SplitMix64 rng(path_seed(seed, index));
  const Direction1D initial = d0 ? *d0 : ((rng.next() >> 63) ? Direction1D::D1 : Direction1D::D0);
  const double a = iv.a(), b = iv.b();
  Direction1D dir = initial;
  double x = x0;
  double t = 0.0;
  std::uint64_t switches = 0;
  for (;;) {
    const bool right = dir == Direction1D::D0;
    const double speed = right ? c0 : c1;
    const double hold = rng.exponential(right ? l0 : l1);
    const double to_wall = (right ? b - x : x - a) / speed;
    if (to_wall <= hold) {
      return {right ? ExitSide::Upper : ExitSide::Lower, t + to_wall, switches, initial};
    }
    t += hold;
    x = right ? std::min(b, x + speed * hold) : std::max(a, x - speed * hold);
    dir = reversed(dir);
    if (++switches >= kMaxEvents) diverged(index);
  }
}

}  // namespace

ExitRecord simulate_telegraph(const TelegraphParams& p, const Interval& iv, double x0,
                              std::optional<Direction1D> d0, std::uint64_t seed,
                              std::uint64_t path_index) {
  return run_telegraph(p.c(), p.c(), p.lambda(), p.lambda(), iv, x0, d0, seed, path_index);
}

ExitRecord simulate_telegraph(const DriftTelegraphParams& p, const Interval& iv, double x0,
                              std::optional<Direction1D> d0, std::uint64_t seed,
                              std::uint64_t path_index) {
  return run_telegraph(p.c0(), p.c1(), p.lambda0(), p.lambda1(), iv, x0, d0, seed, path_index);
}

PlanarExitRecord simulate_planar_strip(const PlanarStripProblem& prob, double x0, double y0,
                                       std::optional<Direction2D> d0, std::uint64_t seed,
                                       std::uint64_t path_index) {
  validate_strip_start(prob, y0);
  SplitMix64 rng(path_seed(seed, path_index));
  const Direction2D initial = d0 ? *d0 : static_cast<Direction2D>(rng.next() >> 62);
  const double c = prob.c(), lambda = prob.lambda(), L = prob.L();
  Direction2D dir = initial;
  double x = x0, y = y0, t = 0.0;
  std::uint64_t switches = 0;
  for (;;) {
    const double hold = rng.exponential(lambda);
    switch (dir) {
      case Direction2D::D0: x += c * hold; break;
      case Direction2D::D2: x -= c * hold; break;
      case Direction2D::D1: {
        const double to_top = (L - y) / c;
        if (to_top <= hold) return {StripSide::Top, x, t + to_top, switches, initial};
        y = std::min(L, y + c * hold);
        break;
      }
      case Direction2D::D3: {
        const double to_bottom = y / c;
        if (to_bottom <= hold) return {StripSide::Bottom, x, t + to_bottom, switches, initial};
        y = std::max(0.0, y - c * hold);
        break;
      }
    }
    t += hold;
    dir = (rng.next() >> 63) ? rotated_ccw(dir) : rotated_cw(dir);
    if (++switches >= kMaxEvents) diverged(path_index);
  }
}

double silverman_bandwidth(std::vector<double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw Error(Errc::EmptySample, "bandwidth needs at least two observations");
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  auto quantile = [&](double q) {
    const std::size_t k = static_cast<std::size_t>(q * static_cast<double>(n - 1));
    std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(k), sample.end());
    return sample[k];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) throw Error(Errc::EmptySample, "sample has no spread");
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

strip::DensityProfile empirical_density(const std::vector<PlanarExitRecord>& records, double x0,
                                        double y0, const std::vector<double>& z_grid,
                                        const KdeOptions& opts) {
  if (records.empty()) throw Error(Errc::EmptySample, "no records");
  for (std::size_t i = 1; i < z_grid.size(); ++i) {
    if (!(z_grid[i] > z_grid[i - 1]))
      throw Error(Errc::InvalidParameter, "z grid must be strictly increasing");
  }
  const bool all_down = std::all_of(records.begin(), records.end(), [](const auto& r) {
    return r.initial == Direction2D::D3;
  });

  std::vector<double> sample;
  sample.reserve(records.size());
  std::size_t atoms = 0;
  for (const auto& r : records) {
    if (r.side != StripSide::Bottom) continue;
    if (all_down && std::abs(r.exit_abscissa - x0) <= 1e-12) {
      ++atoms;
      continue;
    }
    sample.push_back(r.exit_abscissa);
  }

  strip::DensityProfile out;
  out.z_grid = z_grid;
  out.values.assign(z_grid.size(), 0.0);
  out.j = all_down ? Direction2D::D3 : records.front().initial;
  out.x = x0;
  out.y = y0;
  out.singular_mass = static_cast<double>(atoms) / static_cast<double>(records.size());
  const std::size_t norm_count = records.size() - atoms;
  if (sample.empty() || norm_count == 0) return out;

  const double h = opts.bandwidth ? *opts.bandwidth : silverman_bandwidth(sample);
  if (!(h > 0.0)) throw Error(Errc::InvalidParameter, "bandwidth must be positive");
  const double reach = 8.0 * h;
  const double coeff = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * h *
                              static_cast<double>(norm_count));
  auto kernel = [h](double d) { return std::exp(-0.5 * (d / h) * (d / h)); };

  // Private accumulators per chunk of the sample, summed in chunk order.
  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t chunks = (sample.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(z_grid.size(), 0.0));
  parallel_for(chunks, [&](std::size_t ci) {
    std::vector<double>& acc = partial[ci];
    const std::size_t lo = ci * kChunk;
    const std::size_t hi = std::min(sample.size(), lo + kChunk);
    for (std::size_t k = lo; k < hi; ++k) {
      const double zi = sample[k];
      const auto first = std::lower_bound(z_grid.begin(), z_grid.end(), zi - reach);
      const auto last = std::upper_bound(z_grid.begin(), z_grid.end(), zi + reach);
      if (!opts.split_at_origin) {
        for (auto it = first; it != last; ++it)
          acc[static_cast<std::size_t>(it - z_grid.begin())] += kernel(*it - zi);
        continue;
      }
      const bool right = zi >= x0;
      const double mirror = 2.0 * x0 - zi;
      // grid points on the sample's side of x0 (reflection keeps them within reach)
      for (auto it = first; it != last; ++it) {
        const double z = *it;
        const double both = kernel(z - zi) + kernel(z - mirror);
        if (z == x0) acc[static_cast<std::size_t>(it - z_grid.begin())] += 0.5 * both;
        else if ((z > x0) == right) acc[static_cast<std::size_t>(it - z_grid.begin())] += both;
      }
    }
  });
  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < acc.size(); ++i) out.values[i] += acc[i];
  }
  for (double& v : out.values) v *= coeff;
  return out;
}

void write_paths_csv(std::ostream& os, const std::vector<ExitRecord>& records,
                     const Interval& iv) {
  os << "path,side,exit_z,time,switches\n";
  char buf[64];
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    const bool upper = r.side == ExitSide::Upper;
    os << k << ',' << (upper ? "upper" : "lower") << ',';
    std::snprintf(buf, sizeof buf, "%.17g", upper ? iv.b() : iv.a());
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.time);
    os << buf << ',' << r.switches << '\n';
  }
}

void write_paths_csv(std::ostream& os, const std::vector<PlanarExitRecord>& records) {
  os << "path,side,exit_z,time,switches\n";
  char buf[64];
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    os << k << ',' << (r.side == StripSide::Bottom ? "bottom" : "top") << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.exit_abscissa);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.time);
    os << buf << ',' << r.switches << '\n';
  }
}

}  // namespace telex::mc
