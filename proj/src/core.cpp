#include "awdpd/core.hpp"

#include <cmath>

namespace awdpd {

double nll(const Dataset& data, const Coefficients& beta) {
  const Vector eta = data.X * beta.beta;
  double acc = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    const double pi = clamp_prob(sigmoid(eta[i]));
    acc -= data.y[i] == 1.0 ? std::log(pi) : std::log(1.0 - pi);
  }
  return acc;
}

double dpd_bracket(double pi, double y, double alpha) {
  const double q = 1.0 - pi;
  const double pa = std::pow(pi, alpha);
  const double qa = std::pow(q, alpha);
  // y^{a+1} + (1-y)^{a+1} = 1 for binary y
  return pi * pa + q * qa - (1.0 + 1.0 / alpha) * (y * pa + (1.0 - y) * qa) +
         1.0 / alpha;
}

double dpd_loss(const Dataset& data, const Coefficients& beta,
                const DpdParams& params) {
  if (params.alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  const int n = data.n();
  if (params.alpha == 0.0) return nll(data, beta) / n;

  const Vector eta = data.X * beta.beta;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pi = clamp_prob(sigmoid(eta[i]));
    acc += dpd_bracket(pi, data.y[i], params.alpha);
  }
  return acc / std::pow(static_cast<double>(n), 1.0 + params.alpha);
}

}  // namespace awdpd
