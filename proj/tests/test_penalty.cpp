#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "awdpd/penalty.hpp"
#include "awdpd/rng.hpp"

using namespace awdpd;

namespace {

Coefficients coefs(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return Coefficients(v);
}

}  // namespace

TEST_CASE("constant scheme gives unit weights") {
  const PenaltyWeights w =
      compute_weights(coefs({1.0, 0.0, -4.0, 2.5}), {}, 0.1);
  CHECK(w.w.isOnes());
}

TEST_CASE("hard-threshold weights invert the initial estimate") {
  WeightScheme scheme;
  scheme.kind = WeightKind::HardThreshold;
  const PenaltyWeights w =
      compute_weights(coefs({9.0, 0.0, -0.5, 4.0}), scheme, 0.1);
  CHECK(w.w[0] == scheme.cap);  // zero initial estimate hits the cap
  CHECK(w.w[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(w.w[2] == doctest::Approx(0.25).epsilon(1e-15));

  scheme.cap = 3.0;
  const PenaltyWeights capped =
      compute_weights(coefs({0.0, 1e-9, 0.0}), scheme, 0.1);
  CHECK(capped.w[0] == 3.0);
  CHECK(capped.w[1] == 3.0);
}

TEST_CASE("SCAD-derivative weights follow the three segments") {
  WeightScheme scheme;
  scheme.kind = WeightKind::ScadDeriv;
  const double lambda = 0.1;
  const PenaltyWeights w =
      compute_weights(coefs({0.0, 0.05, 0.5, 0.2, 0.37}), scheme, lambda);
  CHECK(w.w[0] == 1.0);  // |b| <= lambda
  CHECK(w.w[1] == 0.0);  // |b| >= a*lambda = 0.37
  CHECK(w.w[2] == doctest::Approx((0.37 - 0.2) / 0.27).epsilon(1e-12));
  CHECK(w.w[3] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("SCAD weights reject nonpositive lambda and bad a") {
  WeightScheme scheme;
  scheme.kind = WeightKind::ScadDeriv;
  CHECK_THROWS_AS(compute_weights(coefs({0.0, 1.0}), scheme, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_weights(coefs({0.0, 1.0}), scheme, -0.5),
                  std::invalid_argument);
  scheme.scad_a = 2.0;
  CHECK_THROWS_AS(compute_weights(coefs({0.0, 1.0}), scheme, 0.1),
                  std::invalid_argument);
}

TEST_CASE("penalty_value excludes the intercept") {
  PenaltyWeights unit;
  unit.w = Vector::Ones(2);
  CHECK(penalty_value(coefs({5.0, 3.0, -2.0}), unit, 0.1) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(penalty_value(coefs({0.0, 0.0, 0.0}), unit, 0.7) == 0.0);
}

TEST_CASE("hard-threshold penalty telescopes to lambda times support size") {
  WeightScheme scheme;
  scheme.kind = WeightKind::HardThreshold;
  const Coefficients b = coefs({2.0, 1.3, 0.0, -0.2, 7.0});
  const PenaltyWeights w = compute_weights(b, scheme, 0.1);
  CHECK(penalty_value(b, w, 0.25) == doctest::Approx(0.25 * 3).epsilon(1e-14));
}

TEST_CASE("penalty_value is homogeneous in lambda and even in beta") {
  Rng rng = substream(4, 4);
  WeightScheme scheme;
  scheme.kind = WeightKind::HardThreshold;
  for (int trial = 0; trial < 20; ++trial) {
    Vector v(5);
    for (int j = 0; j < 5; ++j) v[j] = rng.normal();
    const Coefficients b{v};
    const PenaltyWeights w = compute_weights(b, scheme, 1.0);
    const double base = penalty_value(b, w, 1.0);
    CHECK(penalty_value(b, w, 3.5) == doctest::Approx(3.5 * base));
    Coefficients flipped{Vector(-v)};
    CHECK(penalty_value(flipped, w, 1.0) == doctest::Approx(base));
  }
}

TEST_CASE("adaptive weight functions are non-increasing in |beta|") {
  Rng rng = substream(9, 9);
  for (auto kind : {WeightKind::HardThreshold, WeightKind::ScadDeriv}) {
    WeightScheme scheme;
    scheme.kind = kind;
    std::vector<double> s(200);
    for (double& v : s) v = 2.0 * rng.uniform();
    std::sort(s.begin(), s.end());
    double prev = std::numeric_limits<double>::infinity();
    for (double v : s) {
      const double w = compute_weights(coefs({0.0, v}), scheme, 0.3).w[0];
      CHECK(w <= prev + 1e-15);
      prev = w;
    }
  }
}

TEST_CASE("weight derivative matches finite differences off the kinks") {
  Rng rng = substream(12, 3);
  const double lambda = 0.2;
  for (auto kind : {WeightKind::Constant, WeightKind::HardThreshold,
                    WeightKind::ScadDeriv}) {
    WeightScheme scheme;
    scheme.kind = kind;
    for (int trial = 0; trial < 50; ++trial) {
      const double s = 0.05 + 1.5 * rng.uniform();
      // keep clear of the piecewise joints
      if (std::abs(s - lambda) < 1e-3) continue;
      if (std::abs(s - scheme.scad_a * lambda) < 1e-3) continue;
      const double h = 1e-7;
      auto weight_at = [&](double v) {
        return compute_weights(coefs({0.0, v}), scheme, lambda).w[0];
      };
      const double fd = (weight_at(s + h) - weight_at(s - h)) / (2.0 * h);
      CHECK(std::abs(weight_derivative(s, scheme, lambda) - fd) < 1e-5);
    }
  }
}
