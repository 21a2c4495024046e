#include "awdpd/influence.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "awdpd/core.hpp"
#include "awdpd/deriv.hpp"

namespace awdpd {

namespace {

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Expected curvature of the per-observation DPD loss at probability pi,
// divided by (alpha+1): E_y[d^2 bracket / d eta^2] under y ~ Bernoulli(pi).
double expected_curvature(double pi, double alpha) {
  const double q = 1.0 - pi;
  return std::pow(pi, alpha + 1.0) * q * q +
         pi * pi * std::pow(q, alpha + 1.0);
}

}  // namespace

Matrix information_matrix(const Dataset& data, const Coefficients& beta,
                          double alpha) {
  const std::vector<int> supp = beta.support();
  const int s = static_cast<int>(supp.size());
  if (s == 0) throw std::invalid_argument("empty support");
  const int n = data.n();
  const double scale =
      (alpha + 1.0) / std::pow(static_cast<double>(n), alpha);
  const Vector eta = data.X * beta.beta;

  Matrix xs(n, s);
  for (int c = 0; c < s; ++c) xs.col(c) = data.X.col(supp[c]);
  Vector wts(n);
  for (int i = 0; i < n; ++i) {
    wts[i] = expected_curvature(clamp_prob(sigmoid(eta[i])), alpha);
  }
  return scale / n * xs.transpose() * wts.asDiagonal() * xs;
}

Vector influence_vector(const IfRequest& req) {
  const std::vector<int> supp = req.beta.support();
  const int s = static_cast<int>(supp.size());
  if (s == 0) throw std::invalid_argument("empty support");
  if (req.x_t.size() != req.beta.dim())
    throw std::invalid_argument("contamination point length mismatch");
  if (req.if_initial && req.if_initial->size() != s)
    throw std::invalid_argument("if_initial must match the support size");

  const Matrix S = information_matrix(req.data, req.beta, req.alpha);
  Eigen::JacobiSVD<Matrix> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 1e-12 * std::max(smax, 1.0))) {
    std::ostringstream msg;
    msg << "singular sensitivity matrix (smallest singular value " << smin
        << ")";
    throw NumericalError(msg.str());
  }

  // support-restricted pieces
  Vector beta1(s), xt1(s);
  for (int c = 0; c < s; ++c) {
    beta1[c] = req.beta.beta[supp[c]];
    xt1[c] = req.x_t[supp[c]];
  }
  const double n_alpha =
      std::pow(static_cast<double>(req.data.n()), req.alpha);

  const PenaltyWeights w = compute_weights(req.beta, req.scheme, req.lambda);
  Vector rhs = (1.0 + req.alpha) / n_alpha *
               psi(xt1.dot(beta1), req.y_t, req.alpha) * xt1;
  for (int c = 0; c < s; ++c) {
    rhs[c] += req.lambda * w.w[supp[c] - 1] * sign_of(beta1[c]);
  }
  if (req.if_initial) {
    // beta_tilde = beta at the model, so sign(beta_tilde_j * beta_j) = 1
    for (int c = 0; c < s; ++c) {
      const double dw =
          weight_derivative(std::abs(beta1[c]), req.scheme, req.lambda);
      rhs[c] += req.lambda * dw * (*req.if_initial)[c];
    }
  }

  const Vector if_support = -svd.solve(rhs);
  Vector full = Vector::Zero(req.beta.dim());
  for (int c = 0; c < s; ++c) full[supp[c]] = if_support[c];
  return full;
}

std::vector<CurvePoint> if_norm_curve(const IfRequest& base,
                                      const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("empty t grid");
  std::vector<CurvePoint> curve;
  curve.reserve(t_grid.size());
  for (double t : t_grid) {
    IfRequest req = base;
    req.y_t = 1.0;
    req.x_t = Vector::Constant(base.beta.dim(), t);
    req.x_t[0] = 1.0;
    CurvePoint pt;
    pt.t = t;
    try {
      pt.if_norm = influence_vector(req).norm();
      pt.ok = true;
    } catch (const NumericalError&) {
      pt.ok = false;
    }
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace awdpd
