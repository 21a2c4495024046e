#pragma once

#include "awdpd/types.hpp"

namespace awdpd {

enum class WeightKind {
  Constant,       // w = 1: plain DPD-LASSO
  HardThreshold,  // w = min(1/|b|, cap): adaptive LASSO weights
  ScadDeriv,      // SCAD penalty derivative, needs lambda
};

struct WeightScheme {
  WeightKind kind = WeightKind::Constant;
  double scad_a = 3.7;  // SCAD tuning constant, > 2
  double cap = 1e6;     // weight ceiling, replaces 1/0 at zero coefficients

  bool adaptive() const { return kind != WeightKind::Constant; }
};

// Penalty weights for the non-intercept coordinates.
struct PenaltyWeights {
  Vector w;  // length k, entries in [0, cap]
};

// Weights evaluated at the initial estimate beta_tilde. lambda enters only
// the SCAD variant (its thresholds scale with lambda) and must be positive
// there.
PenaltyWeights compute_weights(const Coefficients& beta_tilde,
                               const WeightScheme& scheme, double lambda);

// lambda * sum_j w_j |beta_j| over j = 1..k; the intercept is excluded.
double penalty_value(const Coefficients& beta, const PenaltyWeights& w,
                     double lambda);

// dw/ds at s = |beta_tilde_j|, needed by the influence function. Piecewise
// flat regions (the cap, the SCAD plateaus) return 0.
double weight_derivative(double s, const WeightScheme& scheme, double lambda);

}  // namespace awdpd
