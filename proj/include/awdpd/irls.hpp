#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "awdpd/penalty.hpp"
#include "awdpd/types.hpp"

namespace awdpd {

// Log-spaced lambda grid specification, anchored at the data-driven
// lambda_max (smallest lambda zeroing every slope at the first IRLS step).
struct GridSpec {
  int n_points = 50;
  double min_ratio = 1e-3;
};

struct FitConfig {
  double alpha = 0.5;
  double lambda = 0.0;  // single-fit regularization level
  std::optional<std::vector<double>> lambda_grid;  // explicit descending grid
  GridSpec grid;
  WeightScheme scheme;
  int max_iter = 100;
  double obj_tol = 1e-7;        // relative objective decrease
  int line_search_points = 20;  // t in {0, 1/19, ..., 1}
  double inner_tol = 1e-9;
  int inner_max_sweeps = 2000;
  std::uint64_t seed = 0;
};

struct FitResult {
  Coefficients beta_hat;
  std::vector<int> support;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // non-increasing
  double clamped_fraction = 0.0;  // floored curvature entries, last iteration
};

struct PathEntry {
  double lambda = 0.0;
  bool ok = false;  // false = this lambda was skipped after a numerical abort
  FitResult fit;
  double hgic = 0.0;
};

struct PathResult {
  std::vector<PathEntry> entries;  // in grid (descending lambda) order
  double lambda_star = 0.0;
  int selected_index = -1;
  FitResult selected;
};

// Intercept at logit(mean(y)) clamped to [-10, 10], slopes zero.
Coefficients default_init(const Dataset& data);

// High-dimensional generalized information criterion,
//   -2 logL / n + (log log n * log k / n) * ||beta||_0,
// with the intercept excluded from the support count. Requires n >= 3.
double hgic(const Dataset& data, const Coefficients& beta);

// Smallest lambda at which the first IRLS surrogate from beta0 keeps every
// slope at zero, computed from the surrogate correlations.
double lambda_max(const Dataset& data, const FitConfig& cfg,
                  const Coefficients& beta0);

std::vector<double> make_lambda_grid(double lmax, const GridSpec& spec);

// One AW-DPD-LASSO fit at cfg.lambda: iteratively reweighted least squares
// with a penalized coordinate-descent inner solve and a grid line search on
// the full objective. Weights are refreshed from the current iterate every
// iteration. Throws NumericalError if the objective turns non-finite at
// every line-search point.
FitResult fit(const Dataset& data, const FitConfig& cfg,
              const Coefficients& beta0);

// Warm-started descending-lambda path with per-lambda HGIC; lambda_star
// minimizes HGIC, ties broken toward larger lambda. Individual lambda
// failures are skipped; throws only if every lambda fails.
PathResult fit_path(const Dataset& data, const FitConfig& cfg,
                    const Coefficients& beta0);

// Stage 1: constant-weight DPD-LASSO path from the default initializer.
// Stage 2: cfg.scheme path initialized at the stage-1 selected estimate.
// With a constant scheme this is a single fit_path.
PathResult two_stage_fit(const Dataset& data, const FitConfig& cfg);

}  // namespace awdpd
