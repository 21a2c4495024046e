#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "awdpd/types.hpp"

namespace awdpd {

// Probabilities are kept away from {0,1} by this margin before any power or
// logarithm is taken, so separated data cannot produce 0^a or log 0.
inline constexpr double kProbEps = 1e-10;

inline double clamp_prob(double p) {
  if (p < kProbEps) return kProbEps;
  if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
  return p;
}

// Overflow-safe logistic function; branches on the sign of eta so exp never
// overflows for |eta| up to ~700.
inline double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

template <class Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& eta) {
  return eta.derived().unaryExpr([](double e) { return sigmoid(e); });
}

// Negative Bernoulli log-likelihood, -sum_i [y log pi + (1-y) log(1-pi)].
double nll(const Dataset& data, const Coefficients& beta);

// Density power divergence between the empirical and model probability
// vectors, (1/n^{1+alpha}) * sum of per-observation brackets. alpha = 0
// dispatches to the Kullback-Leibler limit nll/n, which the limit attains
// exactly for binary responses.
double dpd_loss(const Dataset& data, const Coefficients& beta,
                const DpdParams& params);

// Per-observation DPD bracket at probability pi (already clamped), used by
// the loss and shared with the line search.
double dpd_bracket(double pi, double y, double alpha);

}  // namespace awdpd
