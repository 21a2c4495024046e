#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace awdpd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Input data could not be used (bad file contents, impossible request).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation failed numerically (singular system, diverged objective).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-column location/scale removed from the non-intercept columns of a
// design matrix. Scales use the population-n variance convention, so a
// standardized column has Euclidean norm exactly sqrt(n).
struct Standardization {
  Vector means;   // length k
  Vector scales;  // length k, strictly positive
};

// Binary-response design with an explicit leading intercept column.
struct Dataset {
  Vector y;                 // n entries, each exactly 0 or 1
  Matrix X;                 // n x (k+1); column 0 identically 1
  Standardization scaling;  // applied to columns 1..k

  int n() const { return static_cast<int>(X.rows()); }
  int k() const { return static_cast<int>(X.cols()) - 1; }

  // Prepend the intercept column and standardize `covariates` in place.
  static Dataset from_raw(const Vector& y, const Matrix& covariates);

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

// Regression coefficients, index 0 being the (never penalized) intercept.
struct Coefficients {
  Vector beta;

  Coefficients() = default;
  explicit Coefficients(Vector b) : beta(std::move(b)) {}
  static Coefficients zeros(int k) { return Coefficients(Vector::Zero(k + 1)); }

  double intercept() const { return beta[0]; }
  int dim() const { return static_cast<int>(beta.size()); }

  // Indices j >= 1 with beta[j] != 0; the intercept never counts.
  std::vector<int> support() const;
};

struct DpdParams {
  double alpha = 0.5;  // robustness tuning parameter, >= 0
};

// Map coefficients estimated on the standardized design back to the raw
// covariate scale recorded in `s`.
Coefficients to_raw_scale(const Coefficients& beta, const Standardization& s);

}  // namespace awdpd
