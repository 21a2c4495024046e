#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "awdpd/core.hpp"
#include "awdpd/deriv.hpp"
#include "test_util.hpp"

using namespace awdpd;

namespace {

Vector fd_gradient(const Dataset& d, const Coefficients& b, double alpha) {
  Vector g(b.dim());
  for (int j = 0; j < b.dim(); ++j) {
    const double h = 6e-6 * std::max(1.0, std::abs(b.beta[j]));
    Coefficients hi = b, lo = b;
    hi.beta[j] += h;
    lo.beta[j] -= h;
    g[j] = (dpd_loss(d, hi, {alpha}) - dpd_loss(d, lo, {alpha})) / (2.0 * h);
  }
  return g;
}

Matrix fd_hessian(const Dataset& d, const Coefficients& b, double alpha) {
  const int p = b.dim();
  const double h = 1.2e-4;
  Matrix hess(p, p);
  const double f0 = dpd_loss(d, b, {alpha});
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      double v;
      if (i == j) {
        Coefficients up = b, dn = b;
        up.beta[i] += h;
        dn.beta[i] -= h;
        v = (dpd_loss(d, up, {alpha}) - 2.0 * f0 + dpd_loss(d, dn, {alpha})) /
            (h * h);
      } else {
        Coefficients pp = b, pm = b, mp = b, mm = b;
        pp.beta[i] += h;
        pp.beta[j] += h;
        pm.beta[i] += h;
        pm.beta[j] -= h;
        mp.beta[i] -= h;
        mp.beta[j] += h;
        mm.beta[i] -= h;
        mm.beta[j] -= h;
        v = (dpd_loss(d, pp, {alpha}) - dpd_loss(d, pm, {alpha}) -
             dpd_loss(d, mp, {alpha}) + dpd_loss(d, mm, {alpha})) /
            (4.0 * h * h);
      }
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

Dataset intercept_only(const Vector& y) {
  Dataset d;
  d.y = y;
  d.X = Matrix::Ones(y.size(), 1);
  return d;
}

}  // namespace

TEST_CASE("psi at alpha = 0 is the logistic score residual") {
  for (int i = 0; i < 1000; ++i) {
    const double xb = -20.0 + 0.04 * i;
    for (double y : {0.0, 1.0}) {
      CHECK(std::abs(psi(xb, y, 0.0) - (sigmoid(xb) - y)) < 1e-12);
    }
  }
}

TEST_CASE("psi closed-form anchor at the origin") {
  CHECK(psi(0.0, 1.0, 1.0) == -0.25);
}

TEST_CASE("psi matches finite differences of the loss bracket") {
  Rng rng = substream(5, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const double xb = 2.0 * rng.normal();
    const double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const double alpha = 0.1 + rng.uniform();
    const double h = 6e-6 * std::max(1.0, std::abs(xb));
    auto bracket_at = [&](double e) {
      return dpd_bracket(clamp_prob(sigmoid(e)), y, alpha);
    };
    const double fd = (bracket_at(xb + h) - bracket_at(xb - h)) / (2.0 * h);
    const double analytic = (1.0 + alpha) * psi(xb, y, alpha);
    // 1e-3 floor keeps the relative check above the finite-difference
    // rounding noise (~1e-10 at this step size)
    CHECK(std::abs(analytic - fd) <= 1e-6 * std::max(std::abs(fd), 1e-3));
  }
}

TEST_CASE("gradient matches central finite differences") {
  for (double alpha : {0.1, 0.5, 1.0}) {
    const Dataset d = testutil::random_dataset(30, 5, 101);
    const Coefficients b = testutil::random_coefficients(5, 101, 0.7);
    const Vector g = gradient(d, b, {alpha});
    const Vector fd = fd_gradient(d, b, alpha);
    const double floor = 1e-4 * fd.cwiseAbs().maxCoeff() + 1e-12;
    for (int j = 0; j < b.dim(); ++j) {
      CHECK(std::abs(g[j] - fd[j]) <= 1e-6 * std::max(std::abs(fd[j]), floor));
    }
  }
}

TEST_CASE("gradient vanishes at a minimizer") {
  // intercept-only problem: the first-order condition is pinned by bisection
  // on the finite-difference slope, then the analytic gradient must vanish
  Rng rng = substream(7, 3);
  Vector y(30);
  for (int i = 0; i < 30; ++i) y[i] = rng.bernoulli(0.65) ? 1.0 : 0.0;
  const Dataset d = intercept_only(y);
  const double alpha = 0.3;

  auto slope = [&](double b0) {
    Coefficients b = Coefficients::zeros(0);
    const double h = 1e-6;
    b.beta[0] = b0 + h;
    const double up = dpd_loss(d, b, {alpha});
    b.beta[0] = b0 - h;
    const double dn = dpd_loss(d, b, {alpha});
    return (up - dn) / (2.0 * h);
  };
  double lo = -8.0, hi = 8.0;
  REQUIRE(slope(lo) < 0.0);
  REQUIRE(slope(hi) > 0.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  Coefficients best = Coefficients::zeros(0);
  best.beta[0] = 0.5 * (lo + hi);
  CHECK(gradient(d, best, {alpha}).norm() < 1e-8);
}

TEST_CASE("balanced data at beta = 0 has zero intercept score") {
  Rng rng = substream(19, 2);
  const int n = 40;
  Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = i < n / 2 ? 1.0 : 0.0;
  const Matrix x = testutil::random_covariates(n, 3, rng);
  const Dataset d = Dataset::from_raw(y, x);
  const Vector g = gradient(d, Coefficients::zeros(3), {0.0});
  CHECK(g[0] == 0.0);
}

TEST_CASE("curvature weights reduce to pi(1-pi) at alpha = 0") {
  const Dataset d = testutil::random_dataset(25, 4, 55);
  const Coefficients b = testutil::random_coefficients(4, 55);
  const DerivBundle bundle = hessian_diag(d, b, {0.0});
  const Vector eta = d.X * b.beta;
  for (int i = 0; i < d.n(); ++i) {
    const double pi = clamp_prob(sigmoid(eta[i]));
    const double want = pi * (1.0 - pi);
    CHECK(std::abs(bundle.curv_w_raw[i] - want) <= 1e-12 * want);
  }
  CHECK(bundle.clamped_count == 0);
}

TEST_CASE("unclamped curvature reproduces the finite-difference Hessian") {
  const Dataset d = testutil::random_dataset(20, 4, 71);
  const Coefficients b = testutil::random_coefficients(4, 71, 0.6);
  const double alpha = 0.5;
  const DerivBundle bundle = hessian_diag(d, b, {alpha});
  const Matrix analytic = d.X.transpose() * bundle.curv_w_raw.asDiagonal() *
                          d.X / static_cast<double>(d.n());
  const Matrix fd = fd_hessian(d, b, alpha);
  const double floor = 1e-2 * fd.cwiseAbs().maxCoeff();
  for (int i = 0; i < analytic.rows(); ++i) {
    for (int j = 0; j < analytic.cols(); ++j) {
      CHECK(std::abs(analytic(i, j) - fd(i, j)) <=
            1e-5 * std::max(std::abs(fd(i, j)), floor));
    }
  }
}

TEST_CASE("negative raw curvature is floored and counted") {
  // pi ~ 0.999 with y = 0 at alpha = 1: raw weight 2 pi^2 (1-pi)(2-3pi) < 0
  Vector y(4);
  y << 0, 0, 0, 0;
  const Dataset d = intercept_only(y);
  Coefficients b = Coefficients::zeros(0);
  b.beta[0] = std::log(0.999 / 0.001);
  const DerivBundle bundle = hessian_diag(d, b, {1.0});

  const double pi = 0.999;
  const double closed_form =
      (2.0 / 4.0) * 2.0 * pi * pi * (1.0 - pi) * (2.0 - 3.0 * pi);
  CHECK(closed_form < 0.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(bundle.curv_w_raw[i] < 0.0);
    CHECK(bundle.curv_w[i] == kCurvFloor);
  }
  CHECK(bundle.clamped_count == 4);
}

TEST_CASE("floored surrogate is positive semidefinite") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = testutil::random_dataset(20, 4, seed + 200);
    const Coefficients b = testutil::random_coefficients(4, seed + 200, 2.0);
    const DerivBundle bundle = hessian_diag(d, b, {0.8});
    const Matrix m = d.X.transpose() * bundle.curv_w.asDiagonal() * d.X /
                     static_cast<double>(d.n());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("gradient finite-difference property battery") {
  Rng rng = substream(31, 9);
  const double alphas[] = {0.1, 0.3, 0.5, 0.7, 1.0};
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 10 + static_cast<int>(rng.uniform_int(0, 40));
    const int k = 2 + static_cast<int>(rng.uniform_int(0, 8));
    const double alpha = alphas[rng.uniform_int(0, 4)];
    const Dataset d = testutil::random_dataset(n, k, 300 + rep);
    const Coefficients b = testutil::random_coefficients(k, 300 + rep, 0.8);
    const Vector g = gradient(d, b, {alpha});
    const Vector fd = fd_gradient(d, b, alpha);
    const double denom = std::max(fd.cwiseAbs().maxCoeff(), 1e-10);
    CHECK((g - fd).cwiseAbs().maxCoeff() / denom < 1e-5);
  }
}
