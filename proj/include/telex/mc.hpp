#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "telex/core.hpp"
#include "telex/parallel.hpp"
#include "telex/strip.hpp"

// Exact event-driven simulation of the telegraph processes and of the planar
// orthogonal motion. Paths are piecewise linear; exit instants are solved in
// closed form inside each run, so nothing is discretised in time.

namespace telex::mc {

// RNG ----------------------------------------------------------------------

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based seed for path `index` of a run seeded with `seed`.
constexpr std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + index * 0x9e3779b97f4a7c15ULL);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Exponential with the given rate; +inf when rate == 0.
  double exponential(double rate) noexcept {
    if (rate == 0.0) return HUGE_VAL;
    return -std::log1p(-uniform()) / rate;
  }

 private:
  std::uint64_t state_;
};

// Records ------------------------------------------------------------------

enum class ExitSide : std::uint8_t { Lower, Upper };
enum class StripSide : std::uint8_t { Bottom, Top };

struct ExitRecord {
  ExitSide side;
  double time;
  std::uint64_t switches;
  Direction1D initial;
};

struct PlanarExitRecord {
  StripSide side;
  double exit_abscissa;
  double time;
  std::uint64_t switches;
  Direction2D initial;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kMaxEvents = 1'000'000'000ULL;

// Simulators (nullopt direction: uniform random start) ----------------------

ExitRecord simulate_telegraph(const TelegraphParams& p, const Interval& iv, double x0,
                              std::optional<Direction1D> d0, std::uint64_t seed,
                              std::uint64_t path_index);

ExitRecord simulate_telegraph(const DriftTelegraphParams& p, const Interval& iv, double x0,
                              std::optional<Direction1D> d0, std::uint64_t seed,
                              std::uint64_t path_index);

PlanarExitRecord simulate_planar_strip(const PlanarStripProblem& prob, double x0, double y0,
                                       std::optional<Direction2D> d0, std::uint64_t seed,
                                       std::uint64_t path_index);

// Estimation ----------------------------------------------------------------

inline constexpr std::uint64_t kReductionBlock = 4096;

namespace detail {

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) noexcept {
    n += 1.0;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }

  void merge(const Moments& o) noexcept {
    if (o.n == 0.0) return;
    if (n == 0.0) {
      *this = o;
      return;
    }
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
  }
};

}  // namespace detail

/// Runs n_paths paths (path k simulated by sim(seed, k)) and returns one
/// estimate per statistic. Paths are reduced in fixed blocks in index order,
/// so the result is bit-identical for any worker count.
template <typename Record, typename Sim>
std::vector<MCEstimate> estimate_many(
    const Sim& sim, const std::vector<std::function<double(const Record&)>>& stats,
    std::uint64_t n_paths, std::uint64_t seed, std::size_t workers = worker_count()) {
  if (n_paths < 2) throw Error(Errc::InvalidParameter, "need at least 2 paths");
  const std::size_t n_stats = stats.size();
  const std::uint64_t blocks = (n_paths + kReductionBlock - 1) / kReductionBlock;
  std::vector<detail::Moments> partial(blocks * n_stats);
  parallel_for(
      static_cast<std::size_t>(blocks),
      [&](std::size_t b) {
        const std::uint64_t lo = b * kReductionBlock;
        const std::uint64_t hi = std::min<std::uint64_t>(n_paths, lo + kReductionBlock);
        for (std::uint64_t k = lo; k < hi; ++k) {
          const Record r = sim(seed, k);
          for (std::size_t s = 0; s < n_stats; ++s) partial[b * n_stats + s].add(stats[s](r));
        }
      },
      workers);
  std::vector<MCEstimate> out(n_stats);
  for (std::size_t s = 0; s < n_stats; ++s) {
    detail::Moments total;
    for (std::uint64_t b = 0; b < blocks; ++b) total.merge(partial[b * n_stats + s]);
    const double n = static_cast<double>(n_paths);
    out[s].mean = total.mean;
    out[s].std_error = std::sqrt(total.m2 / (n - 1.0) / n);
    out[s].n_paths = n_paths;
    out[s].seed = seed;
  }
  return out;
}

template <typename Record, typename Sim>
MCEstimate estimate(const Sim& sim, const std::function<double(const Record&)>& stat,
                    std::uint64_t n_paths, std::uint64_t seed,
                    std::size_t workers = worker_count()) {
  return estimate_many<Record>(sim, {stat}, n_paths, seed, workers).front();
}

/// All records of a run, in path order.
template <typename Record, typename Sim>
std::vector<Record> simulate_many(const Sim& sim, std::uint64_t n_paths, std::uint64_t seed,
                                  std::size_t workers = worker_count()) {
  std::vector<Record> out(n_paths);
  parallel_for(
      static_cast<std::size_t>(n_paths),
      [&](std::size_t k) { out[k] = sim(seed, static_cast<std::uint64_t>(k)); }, workers,
      kReductionBlock);
  return out;
}

// Kernel density of exit abscissae -------------------------------------------

struct KdeOptions {
  /// Gaussian kernel bandwidth; Silverman's rule on the continuous subsample
  /// when unset.
  std::optional<double> bandwidth;
  /// Estimate z < x0 and z > x0 separately with reflection at x0 (for laws
  /// with a jump or kink at the starting abscissa). z == x0 gets the average
  /// of the two one-sided values.
  bool split_at_origin = false;
};

double silverman_bandwidth(std::vector<double> sample);

/// Density of the bottom-exit abscissae on z_grid, normalised by the number
/// of records. When every record started with D3, bottom exits at x0 (within
/// 1e-12) form the atom: their fraction goes to singular_mass and `values`
/// estimates u3*, normalised by the number of records outside the atom.
strip::DensityProfile empirical_density(const std::vector<PlanarExitRecord>& records, double x0,
                                        double y0, const std::vector<double>& z_grid,
                                        const KdeOptions& opts = {});

// CSV ------------------------------------------------------------------------

void write_paths_csv(std::ostream& os, const std::vector<ExitRecord>& records,
                     const Interval& iv);
void write_paths_csv(std::ostream& os, const std::vector<PlanarExitRecord>& records);

}  // namespace telex::mc
