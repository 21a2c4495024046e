#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "awdpd/core.hpp"
#include "test_util.hpp"

using namespace awdpd;

namespace {

// straight-line transcription of the DPD divergence, kept independent of
// the library evaluation path
double dpd_oracle(const Dataset& d, const Coefficients& b, double alpha) {
  double total = 0.0;
  for (int i = 0; i < d.n(); ++i) {
    double eta = 0.0;
    for (int j = 0; j < d.k() + 1; ++j) eta += d.X(i, j) * b.beta[j];
    double pi = 1.0 / (1.0 + std::exp(-eta));
    pi = std::min(std::max(pi, 1e-10), 1.0 - 1e-10);
    const double y = d.y[i];
    const double bracket =
        std::pow(pi, 1.0 + alpha) + std::pow(1.0 - pi, 1.0 + alpha) -
        (1.0 + 1.0 / alpha) *
            (y * std::pow(pi, alpha) + (1.0 - y) * std::pow(1.0 - pi, alpha)) +
        (std::pow(y, alpha + 1.0) + std::pow(1.0 - y, alpha + 1.0)) / alpha;
    total += bracket;
  }
  return total / std::pow(static_cast<double>(d.n()), 1.0 + alpha);
}

double nll_oracle(const Dataset& d, const Coefficients& b) {
  double total = 0.0;
  for (int i = 0; i < d.n(); ++i) {
    double eta = 0.0;
    for (int j = 0; j < d.k() + 1; ++j) eta += d.X(i, j) * b.beta[j];
    double pi = 1.0 / (1.0 + std::exp(-eta));
    pi = std::min(std::max(pi, 1e-10), 1.0 - 1e-10);
    total -= d.y[i] * std::log(pi) + (1.0 - d.y[i]) * std::log(1.0 - pi);
  }
  return total;
}

Dataset intercept_only(const Vector& y) {
  Dataset d;
  d.y = y;
  d.X = Matrix::Ones(y.size(), 1);
  return d;
}

}  // namespace

TEST_CASE("sigmoid hits the analytic anchor points") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("sigmoid stays positive without underflow at eta = -40") {
  const double v = sigmoid(-40.0);
  CHECK(v > 0.0);
  CHECK(v < 1e-17);
  const long double e = expl(-40.0L);
  const long double ref = e / (1.0L + e);
  CHECK(std::abs(static_cast<long double>(v) - ref) < 1e-22L);
}

TEST_CASE("sigmoid is strictly monotone and symmetric") {
  // strictly increasing until the value saturates to 1.0 in double precision
  double prev = sigmoid(-700.0);
  for (double eta = -699.0; eta <= 36.0; eta += 1.0) {
    const double cur = sigmoid(eta);
    CHECK(cur > prev);
    prev = cur;
  }
  for (double eta = 37.0; eta <= 700.0; eta += 1.0) {
    const double cur = sigmoid(eta);
    CHECK(cur >= prev);
    prev = cur;
  }
  for (double eta = -30.0; eta <= 30.0; eta += 0.37) {
    CHECK(sigmoid(-eta) == doctest::Approx(1.0 - sigmoid(eta)).epsilon(1e-15));
  }
}

TEST_CASE("dpd_loss at the symmetric single observation") {
  Vector y(1);
  y << 1.0;
  const Dataset d = intercept_only(y);
  const Coefficients b = Coefficients::zeros(0);
  CHECK(dpd_loss(d, b, {1.0}) == 0.5);
}

TEST_CASE("dpd_loss approaches nll/n as alpha vanishes") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Dataset d = testutil::random_dataset(25, 4, seed);
    const Coefficients b = testutil::random_coefficients(4, seed);
    const double limit = nll(d, b) / d.n();
    const double near = dpd_loss(d, b, {1e-6});
    CHECK(std::abs(near - limit) / std::abs(limit) < 1e-4);
  }
}

TEST_CASE("alpha = 0 dispatches to nll/n exactly") {
  const Dataset d = testutil::random_dataset(20, 3, 11);
  const Coefficients b = testutil::random_coefficients(3, 11);
  CHECK(dpd_loss(d, b, {0.0}) == nll(d, b) / d.n());
}

TEST_CASE("dpd_loss matches an independent transcription") {
  const Dataset d = testutil::random_dataset(20, 5, 7);
  const Coefficients b = testutil::random_coefficients(5, 7);
  for (double alpha : {0.1, 0.5, 1.0}) {
    const double got = dpd_loss(d, b, {alpha});
    const double want = dpd_oracle(d, b, alpha);
    CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
  }
}

TEST_CASE("dpd_loss is nonnegative") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Dataset d = testutil::random_dataset(15, 3, seed);
    const Coefficients b = testutil::random_coefficients(3, seed, 3.0);
    for (double alpha : {0.05, 0.3, 1.0, 2.0}) {
      CHECK(dpd_loss(d, b, {alpha}) >= 0.0);
    }
  }
}

TEST_CASE("dpd_loss is invariant under observation permutation") {
  const Dataset d = testutil::random_dataset(30, 4, 23);
  const Coefficients b = testutil::random_coefficients(4, 23);

  std::vector<int> perm(d.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 shuffler(99);
  std::shuffle(perm.begin(), perm.end(), shuffler);

  Dataset shuffled = d;
  for (int i = 0; i < d.n(); ++i) {
    shuffled.y[i] = d.y[perm[i]];
    shuffled.X.row(i) = d.X.row(perm[i]);
  }
  for (double alpha : {0.0, 0.4, 1.0}) {
    const double a = dpd_loss(d, b, {alpha});
    const double c = dpd_loss(shuffled, b, {alpha});
    CHECK(std::abs(a - c) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("nll at beta = 0 is n log 2") {
  const Dataset d = testutil::random_dataset(40, 3, 31);
  const Coefficients b = Coefficients::zeros(3);
  CHECK(nll(d, b) == doctest::Approx(40.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("nll approaches zero from above on separated data") {
  Vector y(6);
  y << 1, 1, 1, 1, 1, 1;
  const Dataset d = intercept_only(y);
  Coefficients b = Coefficients::zeros(0);
  b.beta[0] = 10.0;
  const double far = nll(d, b);
  b.beta[0] = 20.0;
  const double farther = nll(d, b);
  CHECK(far > 0.0);
  CHECK(farther > 0.0);
  CHECK(farther < far);
  CHECK(far < 1e-3);
}

TEST_CASE("nll matches an independent transcription") {
  const Dataset d = testutil::random_dataset(10, 3, 77);
  const Coefficients b = testutil::random_coefficients(3, 77);
  const double got = nll(d, b);
  const double want = nll_oracle(d, b);
  CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
}

TEST_CASE("dataset invariants are enforced") {
  Vector y(3);
  y << 0, 1, 0.5;
  Matrix x(3, 1);
  x << 0.3, -0.1, 2.0;
  CHECK_THROWS_AS(Dataset::from_raw(y, x), std::invalid_argument);

  y << 0, 1, 1;
  Matrix constant(3, 1);
  constant << 2.0, 2.0, 2.0;
  CHECK_THROWS_AS(Dataset::from_raw(y, constant), std::invalid_argument);

  const Dataset ok = Dataset::from_raw(y, x);
  CHECK(ok.X.col(0).isOnes());
  CHECK(std::abs(ok.X.col(1).mean()) < 1e-14);
  CHECK(ok.X.col(1).squaredNorm() == doctest::Approx(3.0).epsilon(1e-12));
}
