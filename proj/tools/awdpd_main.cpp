// Command-line front end: fit / path / simulate / influence / eval.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "awdpd/core.hpp"
#include "awdpd/influence.hpp"
#include "awdpd/io.hpp"
#include "awdpd/irls.hpp"
#include "awdpd/rng.hpp"
#include "awdpd/sim.hpp"

namespace {

using namespace awdpd;
using nlohmann::json;

struct FilterFlags {
  double corr_threshold = -1.0;
  std::string transform = "none";
  double floor_value = std::numeric_limits<double>::quiet_NaN();
  double ceiling_value = std::numeric_limits<double>::quiet_NaN();

  void attach(CLI::App* cmd) {
    cmd->add_option("--corr-threshold", corr_threshold,
                    "keep covariates with |corr(x, y)| above this");
    cmd->add_option("--log-transform", transform,
                    "none|log2|log10 applied before standardization")
        ->check(CLI::IsMember({"none", "log2", "log10"}));
    cmd->add_option("--floor", floor_value, "clamp values below this");
    cmd->add_option("--ceiling", ceiling_value, "clamp values above this");
  }

  FilterSpec spec() const {
    FilterSpec f;
    if (corr_threshold >= 0.0) f.corr_threshold = corr_threshold;
    if (transform == "log2") f.transform = LogTransform::Log2;
    if (transform == "log10") f.transform = LogTransform::Log10;
    if (!std::isnan(floor_value)) f.floor = floor_value;
    if (!std::isnan(ceiling_value)) f.ceiling = ceiling_value;
    return f;
  }
};

struct SchemeFlags {
  std::string scheme = "lasso";
  double scad_a = 3.7;
  double weight_cap = 1e6;

  void attach(CLI::App* cmd) {
    cmd->add_option("--scheme", scheme, "penalty weights: lasso|adaptive|scad")
        ->check(CLI::IsMember({"lasso", "adaptive", "scad"}));
    cmd->add_option("--scad-a", scad_a, "SCAD tuning constant (> 2)");
    cmd->add_option("--weight-cap", weight_cap, "ceiling on adaptive weights");
  }

  WeightScheme make() const {
    WeightScheme s;
    if (scheme == "adaptive") s.kind = WeightKind::HardThreshold;
    if (scheme == "scad") s.kind = WeightKind::ScadDeriv;
    s.scad_a = scad_a;
    s.cap = weight_cap;
    return s;
  }
};

WeightKind parse_scheme_name(const std::string& s) {
  if (s == "lasso") return WeightKind::Constant;
  if (s == "adaptive") return WeightKind::HardThreshold;
  if (s == "scad") return WeightKind::ScadDeriv;
  throw DataError("unknown scheme '" + s + "'");
}

Model make_model(const FitConfig& cfg, const IngestResult& ingested,
                 const FitResult& fit_result, double lambda_star) {
  Model m;
  m.alpha = cfg.alpha;
  m.lambda_star = lambda_star;
  m.scheme = cfg.scheme;
  m.beta = fit_result.beta_hat;
  m.prep = ingested.prep;
  m.fit = fit_result;
  m.seed = cfg.seed;
  return m;
}

void emit_model(const Model& m, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << model_to_json(m);
  } else {
    save_model(m, out_path);
  }
}

int cmd_fit(const std::string& csv, const FilterFlags& filter,
            const SchemeFlags& scheme, double alpha, double lambda,
            int max_iter, double tol, std::uint64_t seed,
            const std::string& out) {
  const IngestResult ingested = ingest(csv, filter.spec());
  FitConfig cfg;
  cfg.alpha = alpha;
  cfg.lambda = lambda;
  cfg.scheme = scheme.make();
  cfg.max_iter = max_iter;
  cfg.obj_tol = tol;
  cfg.seed = seed;

  Coefficients init = default_init(ingested.data);
  if (cfg.scheme.adaptive()) {
    // adaptive weights need a pilot estimate; run the constant-weight fit
    // at the same lambda first
    FitConfig pilot = cfg;
    pilot.scheme.kind = WeightKind::Constant;
    init = fit(ingested.data, pilot, init).beta_hat;
  }
  const FitResult fr = fit(ingested.data, cfg, init);
  emit_model(make_model(cfg, ingested, fr, lambda), out);
  return 0;
}

int cmd_path(const std::string& csv, const FilterFlags& filter,
             const SchemeFlags& scheme, double alpha,
             const std::string& grid_spec, int max_iter, double tol,
             std::uint64_t seed, const std::string& out) {
  const IngestResult ingested = ingest(csv, filter.spec());
  FitConfig cfg;
  cfg.alpha = alpha;
  cfg.scheme = scheme.make();
  cfg.max_iter = max_iter;
  cfg.obj_tol = tol;
  cfg.seed = seed;
  if (!grid_spec.empty()) {
    std::istringstream gs(grid_spec);
    char comma = 0;
    if (!(gs >> cfg.grid.n_points >> comma >> cfg.grid.min_ratio) ||
        comma != ',') {
      throw DataError("--lambda-grid expects n_points,ratio");
    }
  }

  const PathResult path = two_stage_fit(ingested.data, cfg);
  Model m = make_model(cfg, ingested, path.selected, path.lambda_star);
  for (const PathEntry& e : path.entries) {
    m.path_lambda.push_back(e.lambda);
    m.path_hgic.push_back(e.hgic);
    m.path_ok.push_back(e.ok ? 1 : 0);
  }
  emit_model(m, out);
  return 0;
}

int cmd_eval(const std::string& csv, const std::string& model_path,
             const std::string& out) {
  const Model m = load_model(model_path);
  const EvalReport rep = evaluate(m, read_csv(csv));
  json j = {{"accuracy", rep.accuracy}, {"mae", rep.mae}, {"n", rep.n}};
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw DataError("cannot write " + out);
    f << text;
  }
  return 0;
}

std::vector<MethodSpec> parse_methods(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad methods JSON: ") + e.what());
  }
  if (!j.is_array() || j.empty())
    throw DataError("methods JSON must be a non-empty array");
  std::vector<MethodSpec> methods;
  for (const json& item : j) {
    MethodSpec ms;
    ms.name = item.at("name").get<std::string>();
    ms.cfg.alpha = item.at("alpha").get<double>();
    ms.cfg.scheme.kind =
        parse_scheme_name(item.at("scheme").get<std::string>());
    if (item.contains("scad_a"))
      ms.cfg.scheme.scad_a = item["scad_a"].get<double>();
    if (item.contains("weight_cap"))
      ms.cfg.scheme.cap = item["weight_cap"].get<double>();
    if (item.contains("n_lambda"))
      ms.cfg.grid.n_points = item["n_lambda"].get<int>();
    if (item.contains("lambda_min_ratio"))
      ms.cfg.grid.min_ratio = item["lambda_min_ratio"].get<double>();
    if (item.contains("max_iter"))
      ms.cfg.max_iter = item["max_iter"].get<int>();
    if (item.contains("obj_tol")) ms.cfg.obj_tol = item["obj_tol"].get<double>();
    methods.push_back(std::move(ms));
  }
  return methods;
}

std::vector<MethodSpec> default_methods() {
  MethodSpec constant;
  constant.name = "DPD-LASSO a=0.1";
  constant.cfg.alpha = 0.1;
  constant.cfg.scheme.kind = WeightKind::Constant;
  MethodSpec adaptive;
  adaptive.name = "Ad-DPD-LASSO a=0.1";
  adaptive.cfg.alpha = 0.1;
  adaptive.cfg.scheme.kind = WeightKind::HardThreshold;
  return {constant, adaptive};
}

int cmd_simulate(int n, int k, double rho, double eps,
                 const std::string& contamination, int reps,
                 const std::string& methods_path, std::uint64_t seed,
                 const std::string& out) {
  SimScenario scn;
  scn.n = n;
  scn.k = k;
  scn.rho = rho;
  scn.eps = eps;
  scn.seed = seed;
  scn.beta_true = default_beta_true(k);
  if (contamination == "labels") {
    scn.contamination = ContaminationKind::LabelFlip;
  } else if (contamination == "leverage") {
    scn.contamination = ContaminationKind::Leverage;
  }

  const std::vector<MethodSpec> methods =
      methods_path.empty() ? default_methods() : parse_methods(methods_path);
  const std::vector<MethodSummary> table = run_experiment(scn, methods, reps);

  std::ostringstream csv;
  csv << "method,MS,TP,TN,MSES,MAE,MS_se,TP_se,TN_se,MSES_se,MAE_se,failures\n";
  for (const MethodSummary& row : table) {
    csv << row.name << ',' << format_double(row.mean.ms) << ','
        << format_double(row.mean.tp) << ',' << format_double(row.mean.tn)
        << ',' << format_double(row.mean.mses) << ','
        << format_double(row.mean.mae) << ',' << format_double(row.se.ms)
        << ',' << format_double(row.se.tp) << ',' << format_double(row.se.tn)
        << ',' << format_double(row.se.mses) << ','
        << format_double(row.se.mae) << ',' << row.failures << '\n';
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!f) throw DataError("cannot write " + out);
    f << csv.str();
  }
  return 0;
}

int cmd_influence(const std::string& beta_csv, double alpha, double lambda,
                  const SchemeFlags& scheme, int n, double t_min, double t_max,
                  int t_points, std::uint64_t seed, const std::string& out) {
  std::vector<double> slopes;
  std::istringstream bs(beta_csv);
  std::string field;
  while (std::getline(bs, field, ',')) {
    try {
      slopes.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw DataError("--beta expects comma-separated numbers");
    }
  }
  if (slopes.empty()) throw DataError("--beta must name at least one slope");
  if (t_points < 1) throw DataError("--t-points must be >= 1");
  if (!(t_min <= t_max)) throw DataError("--t-min must not exceed --t-max");

  const int k = static_cast<int>(slopes.size());
  IfRequest req;
  req.beta = Coefficients::zeros(k);
  for (int j = 0; j < k; ++j) req.beta.beta[j + 1] = slopes[j];
  req.alpha = alpha;
  req.lambda = lambda;
  req.scheme = scheme.make();

  // synthetic standardized design for the fixed-design sensitivity matrix
  Rng rng = substream(seed, 0);
  Matrix covariates(n, k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) covariates(i, j) = rng.normal();
  }
  const Vector eta =
      (covariates * req.beta.beta.tail(k)).array() + req.beta.beta[0];
  Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.bernoulli(sigmoid(eta[i])) ? 1.0 : 0.0;
  req.data = Dataset::from_raw(y, covariates);

  std::vector<double> grid(t_points);
  for (int i = 0; i < t_points; ++i) {
    grid[i] = t_points == 1
                  ? t_min
                  : t_min + (t_max - t_min) * i / (t_points - 1);
  }
  const std::vector<CurvePoint> curve = if_norm_curve(req, grid);

  std::ostringstream csv;
  csv << "t,if_norm\n";
  for (const CurvePoint& pt : curve) {
    csv << format_double(pt.t) << ','
        << (pt.ok ? format_double(pt.if_norm) : "nan") << '\n';
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!f) throw DataError("cannot write " + out);
    f << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptively weighted DPD-LASSO for sparse logistic regression"};
  app.require_subcommand(1);

  std::string csv_path, out_path, model_path, methods_path, grid_spec;
  std::string beta_csv = "3,2", contamination = "none";
  double alpha = 0.5, lambda = 0.1, tol = 1e-7;
  double rho = 0.5, eps = 0.0, t_min = -100.0, t_max = 100.0;
  int max_iter = 100, n = 100, k = 50, reps = 20, t_points = 201;
  std::uint64_t seed = 0;
  FilterFlags filter;
  SchemeFlags scheme;

  CLI::App* fit_cmd = app.add_subcommand("fit", "single-lambda fit");
  fit_cmd->add_option("csv", csv_path, "training CSV with a 'y' column")
      ->required();
  fit_cmd->add_option("--alpha", alpha, "DPD robustness parameter");
  fit_cmd->add_option("--lambda", lambda, "regularization level")->required();
  fit_cmd->add_option("--max-iter", max_iter, "IRLS iteration cap");
  fit_cmd->add_option("--tol", tol, "relative objective tolerance");
  fit_cmd->add_option("--seed", seed, "random seed (recorded in output)");
  fit_cmd->add_option("--out", out_path, "model JSON path (default stdout)");
  filter.attach(fit_cmd);
  scheme.attach(fit_cmd);

  CLI::App* path_cmd =
      app.add_subcommand("path", "lambda path with HGIC selection");
  path_cmd->add_option("csv", csv_path, "training CSV with a 'y' column")
      ->required();
  path_cmd->add_option("--alpha", alpha, "DPD robustness parameter");
  path_cmd->add_option("--lambda-grid", grid_spec,
                       "n_points,ratio for the log-spaced grid");
  path_cmd->add_option("--max-iter", max_iter, "IRLS iteration cap");
  path_cmd->add_option("--tol", tol, "relative objective tolerance");
  path_cmd->add_option("--seed", seed, "random seed (recorded in output)");
  path_cmd->add_option("--out", out_path, "model JSON path (default stdout)");
  filter.attach(path_cmd);
  scheme.attach(path_cmd);

  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Monte-Carlo contamination study");
  sim_cmd->add_option("--n", n, "observations per replication");
  sim_cmd->add_option("--k", k, "covariates");
  sim_cmd->add_option("--rho", rho, "Toeplitz correlation base");
  sim_cmd->add_option("--eps", eps, "contamination level");
  sim_cmd
      ->add_option("--contamination", contamination,
                   "none|labels|leverage")
      ->check(CLI::IsMember({"none", "labels", "leverage"}));
  sim_cmd->add_option("--reps", reps, "replications");
  sim_cmd->add_option("--methods", methods_path, "methods spec JSON");
  sim_cmd->add_option("--seed", seed, "master seed");
  sim_cmd->add_option("--out", out_path, "table CSV path (default stdout)");

  CLI::App* if_cmd =
      app.add_subcommand("influence", "influence-function norm curve");
  if_cmd->add_option("--alpha", alpha, "DPD robustness parameter");
  if_cmd->add_option("--lambda", lambda, "penalty level");
  if_cmd->add_option("--beta", beta_csv, "comma-separated nonzero slopes");
  if_cmd->add_option("--n", n, "synthetic design size");
  if_cmd->add_option("--t-min", t_min, "contamination ray start");
  if_cmd->add_option("--t-max", t_max, "contamination ray end");
  if_cmd->add_option("--t-points", t_points, "grid size");
  if_cmd->add_option("--seed", seed, "design seed");
  if_cmd->add_option("--out", out_path, "curve CSV path (default stdout)");
  scheme.scheme = "adaptive";
  scheme.attach(if_cmd);

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "score a saved model on a CSV");
  eval_cmd->add_option("csv", csv_path, "evaluation CSV with a 'y' column")
      ->required();
  eval_cmd->add_option("--model", model_path, "model JSON")->required();
  eval_cmd->add_option("--out", out_path, "report JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(fit_cmd)) {
      return cmd_fit(csv_path, filter, scheme, alpha, lambda, max_iter, tol,
                     seed, out_path);
    }
    if (app.got_subcommand(path_cmd)) {
      return cmd_path(csv_path, filter, scheme, alpha, grid_spec, max_iter,
                      tol, seed, out_path);
    }
    if (app.got_subcommand(sim_cmd)) {
      return cmd_simulate(n, k, rho, eps, contamination, reps, methods_path,
                          seed, out_path);
    }
    if (app.got_subcommand(if_cmd)) {
      return cmd_influence(beta_csv, alpha, lambda, scheme, n, t_min, t_max,
                           t_points, seed, out_path);
    }
    if (app.got_subcommand(eval_cmd)) {
      return cmd_eval(csv_path, model_path, out_path);
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
