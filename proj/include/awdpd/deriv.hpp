#pragma once

#include "awdpd/types.hpp"

namespace awdpd {

// Curvature entries below this value are floored before entering the IRLS
// surrogate: for alpha > 0 the exact per-observation curvature can turn
// negative far from the optimum, which would break the square-root
// reweighting. The line search keeps descent regardless.
inline constexpr double kCurvFloor = 1e-6;

// M-estimation psi function of the DPD loss in the logistic model,
// evaluated through pi = sigmoid(xb) to stay finite for any |xb|:
//   psi = (pi - y) * (pi^alpha (1-pi) + pi (1-pi)^alpha).
// At alpha = 0 it reduces to the logistic score residual pi - y.
double psi(double xb, double y, double alpha);

// Per-observation first- and second-derivative weights of the DPD loss.
// grad_w[i] is ((alpha+1)/n^alpha) psi_i, so the loss gradient is
// (1/n) X^T grad_w. curv_w_raw[i] is the matching curvature weight: the
// exact loss Hessian is (1/n) X^T diag(curv_w_raw) X. curv_w is the floored
// copy used by the IRLS surrogate.
struct DerivBundle {
  Vector grad_w;      // length n
  Vector curv_w;      // length n, entries >= kCurvFloor
  Vector curv_w_raw;  // length n, unfloored
  int clamped_count = 0;
};

DerivBundle hessian_diag(const Dataset& data, const Coefficients& beta,
                         const DpdParams& params);

// Exact gradient of dpd_loss, (1/n) X^T H1. At alpha = 0 this is the score
// of nll/n.
Vector gradient(const Dataset& data, const Coefficients& beta,
                const DpdParams& params);

}  // namespace awdpd
