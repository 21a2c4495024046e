#include "awdpd/deriv.hpp"

#include <cmath>

#include "awdpd/core.hpp"

namespace awdpd {

double psi(double xb, double y, double alpha) {
  const double pi = clamp_prob(sigmoid(xb));
  const double q = 1.0 - pi;
  const double pa = std::pow(pi, alpha);
  const double qa = std::pow(q, alpha);
  return (pi - y) * (pa * q + pi * qa);
}

namespace {

// d^2/deta^2 of the per-observation DPD bracket, divided by (alpha+1).
double curvature_bracket(double pi, double y, double alpha) {
  const double q = 1.0 - pi;
  const double pa = std::pow(pi, alpha);
  const double qa = std::pow(q, alpha);
  const double t1 = pi * pa * q * ((1.0 + alpha) - (2.0 + alpha) * pi);
  const double t2 = qa * pi * pi * (2.0 - (2.0 + alpha) * pi);
  const double t3 = pa * q * (alpha - (1.0 + alpha) * pi);
  const double t4 = pi * qa * (1.0 - (alpha + 1.0) * pi);
  return t1 + t2 - y * (t3 + t4);
}

}  // namespace

DerivBundle hessian_diag(const Dataset& data, const Coefficients& beta,
                         const DpdParams& params) {
  const int n = data.n();
  const double scale =
      (params.alpha + 1.0) / std::pow(static_cast<double>(n), params.alpha);
  const Vector eta = data.X * beta.beta;

  DerivBundle b;
  b.grad_w.resize(n);
  b.curv_w.resize(n);
  b.curv_w_raw.resize(n);
  for (int i = 0; i < n; ++i) {
    const double pi = clamp_prob(sigmoid(eta[i]));
    const double q = 1.0 - pi;
    const double pa = std::pow(pi, params.alpha);
    const double qa = std::pow(q, params.alpha);
    b.grad_w[i] = scale * (pi - data.y[i]) * (pa * q + pi * qa);
    const double raw = scale * curvature_bracket(pi, data.y[i], params.alpha);
    b.curv_w_raw[i] = raw;
    if (raw < kCurvFloor) {
      b.curv_w[i] = kCurvFloor;
      ++b.clamped_count;
    } else {
      b.curv_w[i] = raw;
    }
  }
  return b;
}

Vector gradient(const Dataset& data, const Coefficients& beta,
                const DpdParams& params) {
  const DerivBundle b = hessian_diag(data, beta, params);
  return data.X.transpose() * b.grad_w / static_cast<double>(data.n());
}

}  // namespace awdpd
