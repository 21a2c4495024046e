#include "awdpd/types.hpp"

#include <cmath>

namespace awdpd {

Dataset Dataset::from_raw(const Vector& y, const Matrix& covariates) {
  const auto n = covariates.rows();
  const auto k = covariates.cols();
  if (y.size() != n) throw std::invalid_argument("y/X row mismatch");
  if (n < 2) throw std::invalid_argument("need at least two observations");

  Dataset d;
  d.y = y;
  d.X.resize(n, k + 1);
  d.X.col(0).setOnes();
  d.scaling.means.resize(k);
  d.scaling.scales.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double m = covariates.col(j).mean();
    const Vector centered = covariates.col(j).array() - m;
    const double s = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
    if (!(s > 1e-12)) {
      throw std::invalid_argument("column " + std::to_string(j) +
                                  " has (near-)zero variance");
    }
    d.scaling.means[j] = m;
    d.scaling.scales[j] = s;
    d.X.col(j + 1) = centered / s;
  }
  d.validate();
  return d;
}

void Dataset::validate() const {
  if (X.rows() != y.size()) throw std::invalid_argument("y/X row mismatch");
  if (X.cols() < 1) throw std::invalid_argument("missing intercept column");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0)
      throw std::invalid_argument("response entries must be exactly 0 or 1");
    if (X(i, 0) != 1.0)
      throw std::invalid_argument("column 0 of X must be identically 1");
  }
  if (!X.allFinite()) throw std::invalid_argument("non-finite design entry");
}

std::vector<int> Coefficients::support() const {
  std::vector<int> s;
  for (int j = 1; j < dim(); ++j) {
    if (beta[j] != 0.0) s.push_back(j);
  }
  return s;
}

Coefficients to_raw_scale(const Coefficients& beta, const Standardization& s) {
  const int k = static_cast<int>(s.means.size());
  if (beta.dim() != k + 1)
    throw std::invalid_argument("coefficient/standardization length mismatch");
  Coefficients raw = Coefficients::zeros(k);
  double b0 = beta.beta[0];
  for (int j = 1; j <= k; ++j) {
    raw.beta[j] = beta.beta[j] / s.scales[j - 1];
    b0 -= raw.beta[j] * s.means[j - 1];
  }
  raw.beta[0] = b0;
  return raw;
}

}  // namespace awdpd
