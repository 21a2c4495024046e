#include "awdpd/irls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "awdpd/core.hpp"
#include "awdpd/deriv.hpp"
#include "awdpd/inner.hpp"

namespace awdpd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Loss evaluated from a precomputed linear predictor; the line search calls
// this for every step size, so the design matvec is hoisted out.
double loss_from_eta(const Vector& eta, const Vector& y, double alpha) {
  const int n = static_cast<int>(eta.size());
  double acc = 0.0;
  if (alpha == 0.0) {
    for (int i = 0; i < n; ++i) {
      const double pi = clamp_prob(sigmoid(eta[i]));
      acc -= y[i] == 1.0 ? std::log(pi) : std::log(1.0 - pi);
    }
    return acc / n;
  }
  for (int i = 0; i < n; ++i) {
    acc += dpd_bracket(clamp_prob(sigmoid(eta[i])), y[i], alpha);
  }
  return acc / std::pow(static_cast<double>(n), 1.0 + alpha);
}

// Reweighted design and (sign-flipped) working response of one IRLS step.
// The un-halved least-squares form expands to 2n times the Newton model of
// the loss, so the surrogate carries 2n * lambda: the inner solve is then
// the exact proximal Newton step of dpd_loss + lambda * penalty.
SurrogateProblem build_surrogate(const Dataset& data, const DerivBundle& b,
                                 const Vector& eta, double lambda,
                                 const PenaltyWeights& w) {
  const Vector sqrt_h = b.curv_w.cwiseSqrt();
  SurrogateProblem p;
  p.Xm = data.X.array().colwise() * sqrt_h.array();
  const Vector z = b.grad_w.cwiseQuotient(b.curv_w) - eta;
  p.ym = -sqrt_h.cwiseProduct(z);
  p.lambda = 2.0 * static_cast<double>(data.n()) * lambda;
  p.weights = w;
  return p;
}

void check_config(const FitConfig& cfg) {
  if (cfg.alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (cfg.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (cfg.line_search_points < 2)
    throw std::invalid_argument("line search needs both endpoints");
  if (!(cfg.obj_tol > 0.0)) throw std::invalid_argument("obj_tol must be > 0");
}

}  // namespace

Coefficients default_init(const Dataset& data) {
  Coefficients beta = Coefficients::zeros(data.k());
  const double ybar = data.y.mean();
  double logit = 0.0;
  if (ybar <= 0.0) {
    logit = -10.0;
  } else if (ybar >= 1.0) {
    logit = 10.0;
  } else {
    logit = std::clamp(std::log(ybar / (1.0 - ybar)), -10.0, 10.0);
  }
  beta.beta[0] = logit;
  return beta;
}

double hgic(const Dataset& data, const Coefficients& beta) {
  const int n = data.n();
  const int k = data.k();
  if (n <= 2) throw std::invalid_argument("hgic needs n > e");
  if (k < 1) throw std::invalid_argument("hgic needs k >= 1");
  const double s = static_cast<double>(beta.support().size());
  return 2.0 * nll(data, beta) / n +
         std::log(std::log(static_cast<double>(n))) *
             std::log(static_cast<double>(k)) / n * s;
}

double lambda_max(const Dataset& data, const FitConfig& cfg,
                  const Coefficients& beta0) {
  const DpdParams params{cfg.alpha};
  const DerivBundle b = hessian_diag(data, beta0, params);
  const Vector eta = data.X * beta0.beta;
  PenaltyWeights w;
  w.w = Vector::Ones(data.k());
  SurrogateProblem p = build_surrogate(data, b, eta, 0.0, w);

  // intercept solved exactly, slopes at zero
  const double s0 = p.Xm.col(0).squaredNorm();
  const double g0 = s0 > 0.0 ? p.Xm.col(0).dot(p.ym) / s0 : 0.0;
  const Vector r = p.ym - p.Xm.col(0) * g0;

  double lmax = 0.0;
  for (int j = 1; j <= data.k(); ++j) {
    const double c = std::abs(p.Xm.col(j).dot(r));
    const double s_init = std::abs(beta0.beta[j]);
    double lj = 0.0;
    switch (cfg.scheme.kind) {
      case WeightKind::Constant:
        lj = 2.0 * c;
        break;
      case WeightKind::HardThreshold: {
        const double wj =
            s_init == 0.0 ? cfg.scheme.cap
                          : std::min(1.0 / s_init, cfg.scheme.cap);
        lj = 2.0 * c / wj;
        break;
      }
      case WeightKind::ScadDeriv: {
        // lambda * w(s; lambda) is nondecreasing: 0 below s/a, then
        // (a*lambda - s)/(a-1), then lambda itself beyond s. Invert at 2c.
        const double a = cfg.scheme.scad_a;
        if (2.0 * c > s_init) {
          lj = 2.0 * c;
        } else {
          lj = (2.0 * c * (a - 1.0) + s_init) / a;
        }
        break;
      }
    }
    lmax = std::max(lmax, lj);
  }
  return std::max(lmax, 1e-12);
}

std::vector<double> make_lambda_grid(double lmax, const GridSpec& spec) {
  if (spec.n_points < 1) throw std::invalid_argument("empty lambda grid");
  if (!(spec.min_ratio > 0.0 && spec.min_ratio < 1.0))
    throw std::invalid_argument("min_ratio must lie in (0,1)");
  std::vector<double> grid(spec.n_points);
  if (spec.n_points == 1) {
    grid[0] = lmax;
    return grid;
  }
  const double step =
      std::log(spec.min_ratio) / static_cast<double>(spec.n_points - 1);
  for (int i = 0; i < spec.n_points; ++i) {
    grid[i] = lmax * std::exp(step * i);
  }
  return grid;
}

FitResult fit(const Dataset& data, const FitConfig& cfg,
              const Coefficients& beta0) {
  check_config(cfg);
  if (beta0.dim() != data.k() + 1)
    throw std::invalid_argument("beta0 length mismatch");
  if (!beta0.beta.allFinite())
    throw std::invalid_argument("beta0 must be finite");

  const DpdParams params{cfg.alpha};
  const int n = data.n();
  const int ls_points = cfg.line_search_points;

  Coefficients beta = beta0;
  Vector eta = data.X * beta.beta;
  PenaltyWeights w = compute_weights(beta, cfg.scheme, cfg.lambda);

  FitResult out;
  out.objective_trace.push_back(loss_from_eta(eta, data.y, cfg.alpha) +
                                penalty_value(beta, w, cfg.lambda));

  for (int m = 1; m <= cfg.max_iter; ++m) {
    const DerivBundle bundle = hessian_diag(data, beta, params);
    out.clamped_fraction = static_cast<double>(bundle.clamped_count) / n;

    const SurrogateProblem p =
        build_surrogate(data, bundle, eta, cfg.lambda, w);
    const InnerResult inner =
        solve_weighted_lasso(p, beta, cfg.inner_tol, cfg.inner_max_sweeps);
    const Vector eta_gamma = data.X * inner.gamma.beta;

    // beta^{m+1} = t beta^m + (1-t) gamma over the t grid; t = 1 keeps the
    // current iterate, so a descent candidate always exists
    double best_obj = kInf;
    double best_t = 1.0;
    Coefficients candidate = beta;
    for (int i = 0; i < ls_points; ++i) {
      const double t = static_cast<double>(i) / (ls_points - 1);
      const Vector beta_t = t * beta.beta + (1.0 - t) * inner.gamma.beta;
      const Vector eta_t = t * eta + (1.0 - t) * eta_gamma;
      const Coefficients bt(beta_t);
      const double obj = loss_from_eta(eta_t, data.y, cfg.alpha) +
                         penalty_value(bt, w, cfg.lambda);
      if (std::isfinite(obj) && obj < best_obj) {
        best_obj = obj;
        best_t = t;
        candidate = bt;
      }
    }
    if (!std::isfinite(best_obj)) {
      throw NumericalError(
          "objective non-finite at every line-search point (iteration " +
          std::to_string(m) + ", lambda " + std::to_string(cfg.lambda) + ")");
    }

    out.iterations = m;
    const double prev = out.objective_trace.back();
    if (best_obj > prev) {
      // the weight refresh broke descent: the previous iterate is the best
      // recorded one, stop there
      out.converged = true;
      break;
    }
    beta = candidate;
    eta = best_t == 0.0 ? eta_gamma
                        : Vector(best_t * eta + (1.0 - best_t) * eta_gamma);
    out.objective_trace.push_back(best_obj);
    const double rel = (prev - best_obj) / std::max(std::abs(prev), 1e-12);
    if (rel < cfg.obj_tol) {
      out.converged = true;
      break;
    }
    w = compute_weights(beta, cfg.scheme, cfg.lambda);
  }

  out.beta_hat = beta;
  out.support = beta.support();
  return out;
}

PathResult fit_path(const Dataset& data, const FitConfig& cfg,
                    const Coefficients& beta0) {
  std::vector<double> grid;
  if (cfg.lambda_grid) {
    grid = *cfg.lambda_grid;
    if (grid.empty()) throw std::invalid_argument("empty lambda grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0)) throw std::invalid_argument("lambda must be > 0");
      if (i > 0 && !(grid[i] < grid[i - 1]))
        throw std::invalid_argument("lambda grid must be strictly descending");
    }
  } else {
    grid = make_lambda_grid(lambda_max(data, cfg, beta0), cfg.grid);
  }

  PathResult out;
  out.entries.reserve(grid.size());
  Coefficients warm = beta0;
  for (double lambda : grid) {
    FitConfig local = cfg;
    local.lambda = lambda;
    PathEntry entry;
    entry.lambda = lambda;
    try {
      entry.fit = fit(data, local, warm);
      entry.hgic = hgic(data, entry.fit.beta_hat);
      entry.ok = true;
      warm = entry.fit.beta_hat;
    } catch (const NumericalError&) {
      entry.ok = false;
      entry.hgic = kInf;
    }
    out.entries.push_back(std::move(entry));
  }

  out.selected_index = -1;
  double best = kInf;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    // strict comparison on a descending grid breaks ties toward larger lambda
    if (out.entries[i].ok && out.entries[i].hgic < best) {
      best = out.entries[i].hgic;
      out.selected_index = static_cast<int>(i);
    }
  }
  if (out.selected_index < 0)
    throw NumericalError("every lambda in the path failed");
  out.lambda_star = out.entries[out.selected_index].lambda;
  out.selected = out.entries[out.selected_index].fit;
  return out;
}

PathResult two_stage_fit(const Dataset& data, const FitConfig& cfg) {
  if (!cfg.scheme.adaptive()) {
    return fit_path(data, cfg, default_init(data));
  }
  FitConfig stage1 = cfg;
  stage1.scheme.kind = WeightKind::Constant;
  stage1.lambda_grid.reset();  // stage-1 grid anchored at its own lambda_max
  const PathResult first = fit_path(data, stage1, default_init(data));
  return fit_path(data, cfg, first.selected.beta_hat);
}

}  // namespace awdpd
