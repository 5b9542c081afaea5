#pragma once

#include <utility>

#include "telex/core.hpp"

// Brownian-motion exit functionals that the finite-velocity results converge
// to under lambda, c -> infinity with lambda / c^2 -> 1.

namespace telex::brownian {

double exit_prob_upper(const Interval& iv, double x);
double mean_exit_time(const Interval& iv, double x);

/// Drift mu; linear limit for |mu| < 1e-10.
double drift_exit_prob_upper(const Interval& iv, double x, double mu);

/// Drift mu; series in mu when |mu| (b - a) < 1e-6.
double drift_mean_exit_time(const Interval& iv, double x, double mu);

/// (probability of leaving the strip 0 <= y <= L through y = 0, mean exit time)
std::pair<double, double> strip_refs(double L, double y);

}  // namespace telex::brownian
