#include "awdpd/penalty.hpp"

#include <cmath>

namespace awdpd {

namespace {

double one_weight(double s, const WeightScheme& scheme, double lambda) {
  switch (scheme.kind) {
    case WeightKind::Constant:
      return 1.0;
    case WeightKind::HardThreshold:
      if (s == 0.0) return scheme.cap;
      return std::min(1.0 / s, scheme.cap);
    case WeightKind::ScadDeriv: {
      if (s <= lambda) return 1.0;
      const double a = scheme.scad_a;
      return std::max(a * lambda - s, 0.0) / ((a - 1.0) * lambda);
    }
  }
  return 1.0;
}

}  // namespace

PenaltyWeights compute_weights(const Coefficients& beta_tilde,
                               const WeightScheme& scheme, double lambda) {
  if (scheme.kind == WeightKind::ScadDeriv) {
    if (!(lambda > 0.0))
      throw std::invalid_argument("SCAD weights need lambda > 0");
    if (!(scheme.scad_a > 2.0))
      throw std::invalid_argument("SCAD constant a must exceed 2");
  }
  if (!(scheme.cap > 0.0) || !std::isfinite(scheme.cap))
    throw std::invalid_argument("weight cap must be finite and positive");

  const int k = beta_tilde.dim() - 1;
  PenaltyWeights pw;
  pw.w.resize(k);
  for (int j = 1; j <= k; ++j) {
    pw.w[j - 1] = one_weight(std::abs(beta_tilde.beta[j]), scheme, lambda);
  }
  return pw;
}

double penalty_value(const Coefficients& beta, const PenaltyWeights& w,
                     double lambda) {
  const int k = beta.dim() - 1;
  if (w.w.size() != k)
    throw std::invalid_argument("weight/coefficient length mismatch");
  double acc = 0.0;
  for (int j = 1; j <= k; ++j) {
    acc += w.w[j - 1] * std::abs(beta.beta[j]);
  }
  return lambda * acc;
}

double weight_derivative(double s, const WeightScheme& scheme, double lambda) {
  switch (scheme.kind) {
    case WeightKind::Constant:
      return 0.0;
    case WeightKind::HardThreshold:
      // flat at the cap (s <= 1/cap), -1/s^2 beyond it
      if (s <= 1.0 / scheme.cap) return 0.0;
      return -1.0 / (s * s);
    case WeightKind::ScadDeriv:
      if (s <= lambda || s >= scheme.scad_a * lambda) return 0.0;
      return -1.0 / ((scheme.scad_a - 1.0) * lambda);
  }
  return 0.0;
}

}  // namespace awdpd
