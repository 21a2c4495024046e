#include "awdpd/sim.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "awdpd/core.hpp"

namespace awdpd {

Coefficients default_beta_true(int k) {
  if (k < 5) throw std::invalid_argument("default truth needs k >= 5");
  Coefficients b = Coefficients::zeros(k);
  b.beta[1] = 3.0;
  b.beta[2] = 1.5;
  b.beta[5] = 2.0;
  return b;
}

void SimScenario::validate() const {
  if (n < 2 || k < 1) throw std::invalid_argument("bad scenario dimensions");
  if (!(std::abs(rho) < 1.0))
    throw std::invalid_argument("|rho| must be < 1 for a positive-definite "
                                "Toeplitz covariance");
  if (!(eps >= 0.0 && eps < 0.5))
    throw std::invalid_argument("contamination level must lie in [0, 0.5)");
  if (beta_true.dim() != k + 1)
    throw std::invalid_argument("beta_true length mismatch");
}

namespace {

Vector linear_predictor(const Matrix& covariates,
                        const Coefficients& beta_true) {
  return (covariates * beta_true.beta.tail(covariates.cols())).array() +
         beta_true.beta[0];
}

}  // namespace

LabelResult contaminate_labels(const Vector& y, const Matrix& covariates,
                               const Coefficients& beta_true, double eps,
                               Rng& rng) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("eps must lie in [0, 1]");
  LabelResult out;
  out.y = y;
  if (eps == 0.0) return out;
  const Vector eta = linear_predictor(covariates, beta_true);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (rng.uniform() < eps) {
      out.y[i] = rng.bernoulli(1.0 - sigmoid(eta[i])) ? 1.0 : 0.0;
      ++out.redrawn;
    }
  }
  return out;
}

LeverageResult contaminate_leverage(const Matrix& covariates, const Vector& y,
                                    const Coefficients& beta_true, double eps,
                                    Rng& rng) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("eps must lie in [0, 1]");
  LeverageResult out;
  out.covariates = covariates;
  if (eps == 0.0) return out;

  std::vector<int> nonzero, zero;
  for (int j = 1; j < beta_true.dim(); ++j) {
    (beta_true.beta[j] != 0.0 ? nonzero : zero).push_back(j - 1);
  }
  if (nonzero.empty())
    throw std::invalid_argument("leverage contamination needs a nonzero "
                                "true coefficient");
  if (zero.size() < 5)
    throw std::invalid_argument("leverage contamination needs at least five "
                                "true-zero coefficients");

  std::vector<int> ones;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1.0) ones.push_back(static_cast<int>(i));
  }
  const int want = static_cast<int>(
      std::ceil(eps * static_cast<double>(y.size())));
  int take = want;
  if (take > static_cast<int>(ones.size())) {
    take = static_cast<int>(ones.size());
    out.truncated = true;
  }
  // partial Fisher-Yates: uniform draw of `take` rows among the y=1 rows
  for (int t = 0; t < take; ++t) {
    const int pick = static_cast<int>(
        rng.uniform_int(t, static_cast<std::uint64_t>(ones.size()) - 1));
    std::swap(ones[t], ones[pick]);
    const int row = ones[t];
    if (rng.bernoulli(0.5)) {
      // type (a): one signal covariate shifted down
      const int col = nonzero[static_cast<int>(
          rng.uniform_int(0, nonzero.size() - 1))];
      out.covariates(row, col) += rng.normal(-5.0, 0.1);
    } else {
      // type (b): five noise covariates shifted up
      std::vector<int> pool = zero;
      for (int pickn = 0; pickn < 5; ++pickn) {
        const int at = static_cast<int>(
            rng.uniform_int(pickn, static_cast<std::uint64_t>(pool.size()) - 1));
        std::swap(pool[pickn], pool[at]);
        out.covariates(row, pool[pickn]) += rng.normal(5.0, 0.1);
      }
    }
    ++out.corrupted;
  }
  return out;
}

GeneratedData generate(const SimScenario& scn) {
  SimScenario checked = scn;
  if (checked.beta_true.dim() == 0) checked.beta_true = default_beta_true(scn.k);
  checked.validate();

  Rng rng = substream(checked.seed, 0);

  // Toeplitz AR(1) covariance through its Cholesky factor
  Matrix sigma(checked.k, checked.k);
  for (int i = 0; i < checked.k; ++i) {
    for (int j = 0; j < checked.k; ++j) {
      sigma(i, j) = std::pow(checked.rho, std::abs(i - j));
    }
  }
  const Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NumericalError("covariance factorization failed");
  const Matrix chol_l = llt.matrixL();

  Matrix z(checked.n, checked.k);
  for (int i = 0; i < checked.n; ++i) {
    for (int j = 0; j < checked.k; ++j) z(i, j) = rng.normal();
  }
  Matrix covariates = z * chol_l.transpose();

  const Vector eta = linear_predictor(covariates, checked.beta_true);
  Vector y(checked.n);
  for (int i = 0; i < checked.n; ++i) {
    y[i] = rng.bernoulli(sigmoid(eta[i])) ? 1.0 : 0.0;
  }

  GeneratedData out;
  out.beta_true = checked.beta_true;
  out.corrupted = 0;
  switch (checked.contamination) {
    case ContaminationKind::None:
      break;
    case ContaminationKind::LabelFlip: {
      LabelResult lr =
          contaminate_labels(y, covariates, checked.beta_true, checked.eps, rng);
      y = lr.y;
      out.corrupted = lr.redrawn;
      break;
    }
    case ContaminationKind::Leverage: {
      LeverageResult lv = contaminate_leverage(covariates, y, checked.beta_true,
                                               checked.eps, rng);
      covariates = lv.covariates;
      out.corrupted = lv.corrupted;
      break;
    }
  }

  out.covariates = covariates;
  out.y = y;
  out.data = Dataset::from_raw(y, covariates);
  return out;
}

MetricsReport compute_metrics(const Coefficients& beta_hat,
                              const Coefficients& beta_true) {
  if (beta_hat.dim() != beta_true.dim())
    throw std::invalid_argument("coefficient length mismatch");
  const int k = beta_hat.dim() - 1;

  int ms = 0, tp_hits = 0, tn_hits = 0, s_true = 0;
  double sq = 0.0, l1 = 0.0;
  for (int j = 1; j <= k; ++j) {
    const bool hat_on = beta_hat.beta[j] != 0.0;
    const bool true_on = beta_true.beta[j] != 0.0;
    if (hat_on) ++ms;
    if (true_on) {
      ++s_true;
      if (hat_on) ++tp_hits;
      const double d = beta_hat.beta[j] - beta_true.beta[j];
      sq += d * d;
    } else if (!hat_on) {
      ++tn_hits;
    }
    l1 += std::abs(beta_hat.beta[j] - beta_true.beta[j]);
  }

  MetricsReport r;
  r.ms = ms;
  r.tp = s_true > 0 ? static_cast<double>(tp_hits) / s_true : 1.0;
  r.tn = k - s_true > 0 ? static_cast<double>(tn_hits) / (k - s_true) : 1.0;
  r.mses = s_true > 0 ? sq / s_true : 0.0;
  r.mae = l1 / k;
  return r;
}

std::vector<MethodSummary> run_experiment(const SimScenario& scn,
                                          const std::vector<MethodSpec>& methods,
                                          int reps) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  const std::size_t m = methods.size();
  std::vector<std::vector<MetricsReport>> samples(m);
  std::vector<int> failures(m, 0);

  for (int rep = 0; rep < reps; ++rep) {
    SimScenario local = scn;
    local.seed =
        mix64(mix64(scn.seed) ^ mix64(static_cast<std::uint64_t>(rep) + 1));
    const GeneratedData gen = generate(local);
    for (std::size_t i = 0; i < m; ++i) {
      try {
        const PathResult path =
            methods[i].cfg.scheme.adaptive()
                ? two_stage_fit(gen.data, methods[i].cfg)
                : fit_path(gen.data, methods[i].cfg,
                           default_init(gen.data));
        const Coefficients raw =
            to_raw_scale(path.selected.beta_hat, gen.data.scaling);
        samples[i].push_back(compute_metrics(raw, gen.beta_true));
      } catch (const NumericalError&) {
        ++failures[i];
      }
    }
  }

  std::vector<MethodSummary> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i].name = methods[i].name;
    out[i].failures = failures[i];
    const auto& rows = samples[i];
    const double cnt = static_cast<double>(rows.size());
    if (rows.empty()) continue;
    auto mean_of = [&](auto pick) {
      double acc = 0.0;
      for (const auto& r : rows) acc += pick(r);
      return acc / cnt;
    };
    auto se_of = [&](auto pick, double mu) {
      if (rows.size() < 2) return 0.0;
      double acc = 0.0;
      for (const auto& r : rows) {
        const double d = pick(r) - mu;
        acc += d * d;
      }
      return std::sqrt(acc / (cnt - 1.0) / cnt);
    };
    auto fill = [&](auto pick, double& mu, double& se) {
      mu = mean_of(pick);
      se = se_of(pick, mu);
    };
    fill([](const MetricsReport& r) { return r.ms; }, out[i].mean.ms,
         out[i].se.ms);
    fill([](const MetricsReport& r) { return r.tp; }, out[i].mean.tp,
         out[i].se.tp);
    fill([](const MetricsReport& r) { return r.tn; }, out[i].mean.tn,
         out[i].se.tn);
    fill([](const MetricsReport& r) { return r.mses; }, out[i].mean.mses,
         out[i].se.mses);
    fill([](const MetricsReport& r) { return r.mae; }, out[i].mean.mae,
         out[i].se.mae);
  }
  return out;
}

}  // namespace awdpd
