// Shared helpers for the test suites: deterministic random problem
// generation and a brute-force grid-refinement minimizer used as an
// independent oracle.
#pragma once

#include <functional>
#include <utility>

#include "awdpd/rng.hpp"
#include "awdpd/types.hpp"

namespace testutil {

inline awdpd::Matrix random_covariates(int n, int k, awdpd::Rng& rng) {
  awdpd::Matrix x(n, k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) x(i, j) = rng.normal();
  }
  return x;
}

inline awdpd::Vector random_labels(int n, awdpd::Rng& rng, double p = 0.5) {
  awdpd::Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.bernoulli(p) ? 1.0 : 0.0;
  return y;
}

inline awdpd::Dataset random_dataset(int n, int k, std::uint64_t seed) {
  awdpd::Rng rng = awdpd::substream(seed, 17);
  const awdpd::Matrix x = random_covariates(n, k, rng);
  const awdpd::Vector y = random_labels(n, rng);
  return awdpd::Dataset::from_raw(y, x);
}

inline awdpd::Coefficients random_coefficients(int k, std::uint64_t seed,
                                               double scale = 1.0) {
  awdpd::Rng rng = awdpd::substream(seed, 29);
  awdpd::Coefficients b = awdpd::Coefficients::zeros(k);
  for (int j = 0; j <= k; ++j) b.beta[j] = scale * rng.normal();
  return b;
}

// Labels drawn from the logistic model at beta, so fits have real signal.
inline awdpd::Dataset model_dataset(int n, int k, std::uint64_t seed,
                                    const awdpd::Coefficients& beta) {
  awdpd::Rng rng = awdpd::substream(seed, 43);
  const awdpd::Matrix x = random_covariates(n, k, rng);
  const awdpd::Vector eta =
      (x * beta.beta.tail(k)).array() + beta.beta[0];
  awdpd::Vector y(n);
  for (int i = 0; i < n; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-eta[i]));
    y[i] = rng.bernoulli(p) ? 1.0 : 0.0;
  }
  return awdpd::Dataset::from_raw(y, x);
}

// Exhaustive minimization by repeated grid refinement on a box. Each level
// lays a points^d grid, keeps the best point, and shrinks the box to three
// grid cells around it; suitable for low-dimensional convex objectives.
inline std::pair<awdpd::Vector, double> grid_refine(
    const std::function<double(const awdpd::Vector&)>& f, awdpd::Vector lo,
    awdpd::Vector hi, int points, int levels) {
  const int d = static_cast<int>(lo.size());
  awdpd::Vector best = (lo + hi) / 2.0;
  double best_val = f(best);
  for (int level = 0; level < levels; ++level) {
    std::vector<int> idx(d, 0);
    awdpd::Vector step = (hi - lo) / static_cast<double>(points - 1);
    bool done = false;
    while (!done) {
      awdpd::Vector x(d);
      for (int j = 0; j < d; ++j) x[j] = lo[j] + step[j] * idx[j];
      const double v = f(x);
      if (v < best_val) {
        best_val = v;
        best = x;
      }
      int j = 0;
      while (j < d && ++idx[j] == points) {
        idx[j] = 0;
        ++j;
      }
      done = j == d;
    }
    lo = best - 3.0 * step;
    hi = best + 3.0 * step;
  }
  return {best, best_val};
}

}  // namespace testutil
