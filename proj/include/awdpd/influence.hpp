#pragma once

#include <optional>
#include <vector>

#include "awdpd/penalty.hpp"
#include "awdpd/types.hpp"

namespace awdpd {

// Point-contamination influence diagnostics for the AW-DPD-LASSO functional
// on a fixed design. `beta` is the evaluation point; its nonzero slopes
// define the support block everything is restricted to.
struct IfRequest {
  Dataset data;
  Coefficients beta;
  double alpha = 0.5;
  double lambda = 0.1;
  WeightScheme scheme;
  std::optional<Vector> if_initial;  // IF of the initial estimator on the
                                     // support; nullopt = treated as zero
  double y_t = 1.0;                  // contamination label
  Vector x_t;                        // contamination covariates, k+1, x_t[0]=1
};

// Support-restricted sensitivity matrix of the DPD estimating equations:
//   ((alpha+1)/n^alpha) (1/n) sum_i m(pi_i) x_{1i} x_{1i}^T,
//   m(pi) = pi^{alpha+1} (1-pi)^2 + pi^2 (1-pi)^{alpha+1},
// the expected-curvature weight under the model. At alpha = 0 this is the
// Fisher information block.
Matrix information_matrix(const Dataset& data, const Coefficients& beta,
                          double alpha);

// Influence function of the estimator at the contamination point, returned
// at full length (k+1) with exact zeros in the intercept slot and every
// non-support coordinate. Throws NumericalError naming the smallest
// singular value when the sensitivity matrix is singular.
Vector influence_vector(const IfRequest& req);

struct CurvePoint {
  double t = 0.0;
  double if_norm = 0.0;
  bool ok = false;  // false = evaluation failed, value recorded missing
};

// ||IF||_2 along the identical-contamination ray: for each grid value t the
// contamination point is y_t = 1, covariates all equal to t.
std::vector<CurvePoint> if_norm_curve(const IfRequest& base,
                                      const std::vector<double>& t_grid);

}  // namespace awdpd
