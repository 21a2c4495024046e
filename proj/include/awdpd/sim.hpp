#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "awdpd/irls.hpp"
#include "awdpd/rng.hpp"
#include "awdpd/types.hpp"

namespace awdpd {

enum class ContaminationKind { None, LabelFlip, Leverage };

// Sparse regression truth: slopes (3, 1.5, 0, 0, 2) on the first five
// coordinates, zero elsewhere, zero intercept. Support is {1, 2, 5}.
Coefficients default_beta_true(int k);

struct SimScenario {
  int n = 100;
  int k = 50;
  double rho = 0.5;  // Toeplitz base of the covariate covariance
  Coefficients beta_true;
  ContaminationKind contamination = ContaminationKind::None;
  double eps = 0.0;  // contamination level, in [0, 0.5)
  std::uint64_t seed = 0;

  void validate() const;
};

struct GeneratedData {
  Dataset data;            // contaminated, intercept-augmented, standardized
  Coefficients beta_true;  // raw-scale truth
  Matrix covariates;       // raw (contaminated) n x k covariates
  Vector y;
  int corrupted = 0;  // observations touched by contamination
};

// Rows of the covariate matrix are N(0, Sigma) with Sigma_{ij} = rho^{|i-j|}
// drawn through the Cholesky factor; labels are Bernoulli(sigmoid(x' beta));
// contamination (if any) is injected before standardization.
GeneratedData generate(const SimScenario& scn);

struct LabelResult {
  Vector y;
  int redrawn = 0;  // indices whose label was redrawn (value may coincide)
};

// Each observation independently, with probability eps, has its label
// redrawn from Bernoulli(1 - pi(x' beta_true)). eps up to 1 is accepted
// here; scenario-level validation enforces the < 0.5 contract.
LabelResult contaminate_labels(const Vector& y, const Matrix& covariates,
                               const Coefficients& beta_true, double eps,
                               Rng& rng);

struct LeverageResult {
  Matrix covariates;
  int corrupted = 0;
  bool truncated = false;  // fewer y=1 observations than requested
};

// ceil(eps*n) observations drawn uniformly among those with y = 1; each is
// independently given one of two corruptions with equal probability:
//   (a) one uniformly chosen true-nonzero covariate shifted by N(-5, 0.01),
//   (b) five uniformly chosen true-zero covariates shifted by N(+5, 0.01).
LeverageResult contaminate_leverage(const Matrix& covariates, const Vector& y,
                                    const Coefficients& beta_true, double eps,
                                    Rng& rng);

// Support-recovery and estimation-error summary of one estimate against the
// truth. The intercept is excluded from every support set and norm.
struct MetricsReport {
  double ms = 0.0;    // |supp(beta_hat)|
  double tp = 0.0;    // recovered fraction of the true support
  double tn = 0.0;    // kept-zero fraction of the true zeros
  double mses = 0.0;  // (1/s) ||beta_hat_S - beta_S||^2 over S = supp(truth)
  double mae = 0.0;   // (1/k) ||beta_hat - beta||_1
};

MetricsReport compute_metrics(const Coefficients& beta_hat,
                              const Coefficients& beta_true);

struct MethodSpec {
  std::string name;
  FitConfig cfg;  // adaptive schemes run two_stage_fit, constant fit_path
};

struct MethodSummary {
  std::string name;
  MetricsReport mean;
  MetricsReport se;  // standard errors of the means
  int failures = 0;  // replications dropped after a fit failure
};

// Monte-Carlo protocol: per replication generate -> fit each method ->
// metrics on raw-scale coefficients. Each replication owns the RNG stream
// substream(seed, rep), so the output is a pure function of its arguments.
std::vector<MethodSummary> run_experiment(const SimScenario& scn,
                                          const std::vector<MethodSpec>& methods,
                                          int reps);

}  // namespace awdpd
