#pragma once

#include "awdpd/penalty.hpp"
#include "awdpd/types.hpp"

namespace awdpd {

inline double soft_threshold(double z, double tau) {
  if (z > tau) return z - tau;
  if (z < -tau) return z + tau;
  return 0.0;
}

// Weighted least-squares surrogate of one IRLS step:
//   minimize (ym - Xm g)^T (ym - Xm g) + lambda * sum_{j>=1} w_j |g_j|.
// The quadratic is deliberately un-halved, so coordinate updates threshold
// at lambda*w_j/2. Column 0 of Xm is the curvature-scaled intercept and is
// never penalized.
struct SurrogateProblem {
  Matrix Xm;  // n x (k+1)
  Vector ym;  // n
  double lambda = 0.0;
  PenaltyWeights weights;  // length k
};

double surrogate_objective(const SurrogateProblem& p, const Coefficients& g);

struct InnerResult {
  Coefficients gamma;
  int sweeps = 0;
  bool converged = false;  // false = sweep budget exhausted (flagged success)
};

// Cyclic coordinate descent with soft-thresholding and active-set sweeps.
// Terminates when the largest coordinate change in a full sweep drops below
// tol. The objective is verified non-increasing every sweep.
InnerResult solve_weighted_lasso(const SurrogateProblem& p,
                                 const Coefficients& init, double tol,
                                 int max_sweeps);

struct KktReport {
  double max_violation = 0.0;  // worst slack-normalized residual
  bool ok = false;
};

// Stationarity check at `g`: active coordinates must zero the subgradient,
// inactive ones must sit inside the threshold, both within 10*tol*s_j.
KktReport kkt_check(const SurrogateProblem& p, const Coefficients& g,
                    double tol);

}  // namespace awdpd
