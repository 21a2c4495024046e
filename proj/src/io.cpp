#include "awdpd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "awdpd/core.hpp"

namespace awdpd {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  if (rows.size() < 2) throw DataError("CSV needs a header and data rows");

  CsvTable t;
  t.columns = rows[0];
  const std::size_t m = t.columns.size();
  t.values.resize(static_cast<Eigen::Index>(rows.size() - 1),
                  static_cast<Eigen::Index>(m));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != m) {
      throw DataError("CSV row " + std::to_string(i + 1) + " has " +
                      std::to_string(rows[i].size()) + " fields, expected " +
                      std::to_string(m));
    }
    for (std::size_t j = 0; j < m; ++j) {
      const std::string& f = rows[i][j];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        throw DataError("non-numeric CSV field '" + f + "'");
      }
      while (used < f.size() && std::isspace(static_cast<unsigned char>(f[used])))
        ++used;
      if (used != f.size())
        throw DataError("non-numeric CSV field '" + f + "'");
      t.values(static_cast<Eigen::Index>(i - 1),
               static_cast<Eigen::Index>(j)) = v;
    }
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

namespace {

int response_column(const CsvTable& t) {
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    if (t.columns[j] == "y") return static_cast<int>(j);
  }
  throw DataError("CSV has no column named 'y'");
}

Vector binary_response(const CsvTable& t, int ycol) {
  Vector y = t.values.col(ycol);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0)
      throw DataError("response column 'y' must contain only 0 and 1");
  }
  return y;
}

void apply_filter_column(Vector& col, const FilterSpec& f,
                         const std::string& name) {
  if (f.floor) col = col.cwiseMax(*f.floor);
  if (f.ceiling) col = col.cwiseMin(*f.ceiling);
  if (f.transform != LogTransform::None) {
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (!(col[i] > 0.0))
        throw DataError("log transform of non-positive value in column '" +
                        name + "'");
      col[i] = f.transform == LogTransform::Log2 ? std::log2(col[i])
                                                 : std::log10(col[i]);
    }
  }
}

}  // namespace

IngestResult ingest_table(const CsvTable& table, const FilterSpec& filter) {
  if (filter.corr_threshold &&
      !(*filter.corr_threshold > 0.0 && *filter.corr_threshold < 1.0))
    throw DataError("correlation threshold must lie in (0, 1)");

  const int ycol = response_column(table);
  const Vector y = binary_response(table, ycol);
  const auto n = table.values.rows();
  if (n < 2) throw DataError("need at least two observations");

  const double ybar = y.mean();
  const Vector yc = y.array() - ybar;
  const double ynorm = yc.norm();
  if (filter.corr_threshold && ynorm == 0.0)
    throw DataError("response has no variation, correlation filter undefined");

  std::vector<std::string> retained;
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (static_cast<int>(j) == ycol) continue;
    Vector col = table.values.col(static_cast<Eigen::Index>(j));
    apply_filter_column(col, filter, table.columns[j]);
    const Vector centered = col.array() - col.mean();
    const double cnorm = centered.norm();
    if (cnorm < 1e-12) continue;  // null variation
    if (filter.corr_threshold) {
      const double corr = std::abs(centered.dot(yc) / (cnorm * ynorm));
      if (!(corr > *filter.corr_threshold)) continue;
    }
    retained.push_back(table.columns[j]);
    cols.push_back(std::move(col));
  }
  if (retained.empty())
    throw DataError("no covariate survives the filter");

  Matrix covariates(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    covariates.col(static_cast<Eigen::Index>(j)) = cols[j];
  }

  IngestResult out;
  out.data = Dataset::from_raw(y, covariates);
  out.prep.filter = filter;
  out.prep.retained = std::move(retained);
  out.prep.means = out.data.scaling.means;
  out.prep.scales = out.data.scaling.scales;
  return out;
}

IngestResult ingest(const std::string& csv_path, const FilterSpec& filter) {
  return ingest_table(read_csv(csv_path), filter);
}

namespace {

std::string transform_name(LogTransform t) {
  switch (t) {
    case LogTransform::None: return "none";
    case LogTransform::Log2: return "log2";
    case LogTransform::Log10: return "log10";
  }
  return "none";
}

LogTransform transform_from(const std::string& s) {
  if (s == "none") return LogTransform::None;
  if (s == "log2") return LogTransform::Log2;
  if (s == "log10") return LogTransform::Log10;
  throw DataError("unknown transform '" + s + "'");
}

std::string scheme_name(WeightKind k) {
  switch (k) {
    case WeightKind::Constant: return "lasso";
    case WeightKind::HardThreshold: return "adaptive";
    case WeightKind::ScadDeriv: return "scad";
  }
  return "lasso";
}

WeightKind scheme_from(const std::string& s) {
  if (s == "lasso") return WeightKind::Constant;
  if (s == "adaptive") return WeightKind::HardThreshold;
  if (s == "scad") return WeightKind::ScadDeriv;
  throw DataError("unknown scheme '" + s + "'");
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from_json(const json& a) {
  Vector v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

}  // namespace

std::string model_to_json(const Model& m) {
  json j;
  j["schema"] = m.schema;
  j["alpha"] = m.alpha;
  j["lambda_star"] = m.lambda_star;
  j["scheme"] = {{"type", scheme_name(m.scheme.kind)},
                 {"scad_a", m.scheme.scad_a},
                 {"weight_cap", m.scheme.cap}};

  json coefs;
  coefs["intercept"] = m.beta.beta[0];
  for (const std::string& name : m.prep.retained) {
    if (name == "intercept")
      throw DataError("covariate name 'intercept' is reserved");
  }
  for (std::size_t i = 0; i < m.prep.retained.size(); ++i) {
    coefs[m.prep.retained[i]] = m.beta.beta[static_cast<Eigen::Index>(i) + 1];
  }
  j["coefficients"] = coefs;

  json support = json::array();
  for (int idx : m.beta.support()) support.push_back(m.prep.retained[idx - 1]);
  j["support"] = support;

  json prep;
  prep["transform"] = transform_name(m.prep.filter.transform);
  prep["floor"] = m.prep.filter.floor ? json(*m.prep.filter.floor) : json();
  prep["ceiling"] =
      m.prep.filter.ceiling ? json(*m.prep.filter.ceiling) : json();
  prep["corr_threshold"] = m.prep.filter.corr_threshold
                               ? json(*m.prep.filter.corr_threshold)
                               : json();
  prep["columns"] = m.prep.retained;
  prep["means"] = vector_to_json(m.prep.means);
  prep["scales"] = vector_to_json(m.prep.scales);
  j["preprocessing"] = prep;

  if (!m.path_lambda.empty()) {
    j["path"] = {{"lambda", m.path_lambda},
                 {"hgic", m.path_hgic},
                 {"ok", m.path_ok}};
  }
  j["fit"] = {{"iterations", m.fit.iterations},
              {"converged", m.fit.converged},
              {"objective_trace", m.fit.objective_trace},
              {"clamped_fraction", m.fit.clamped_fraction}};
  j["seed"] = m.seed;
  return j.dump(2) + "\n";
}

Model model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad model JSON: ") + e.what());
  }
  try {
    Model m;
    m.schema = j.at("schema").get<std::string>();
    if (m.schema != "awdpd-model/1")
      throw DataError("unsupported model schema '" + m.schema + "'");
    m.alpha = j.at("alpha").get<double>();
    m.lambda_star = j.at("lambda_star").get<double>();
    m.scheme.kind = scheme_from(j.at("scheme").at("type").get<std::string>());
    m.scheme.scad_a = j.at("scheme").at("scad_a").get<double>();
    m.scheme.cap = j.at("scheme").at("weight_cap").get<double>();

    const json& prep = j.at("preprocessing");
    m.prep.filter.transform =
        transform_from(prep.at("transform").get<std::string>());
    if (!prep.at("floor").is_null())
      m.prep.filter.floor = prep.at("floor").get<double>();
    if (!prep.at("ceiling").is_null())
      m.prep.filter.ceiling = prep.at("ceiling").get<double>();
    if (!prep.at("corr_threshold").is_null())
      m.prep.filter.corr_threshold = prep.at("corr_threshold").get<double>();
    m.prep.retained = prep.at("columns").get<std::vector<std::string>>();
    m.prep.means = vector_from_json(prep.at("means"));
    m.prep.scales = vector_from_json(prep.at("scales"));

    const json& coefs = j.at("coefficients");
    m.beta = Coefficients::zeros(static_cast<int>(m.prep.retained.size()));
    m.beta.beta[0] = coefs.at("intercept").get<double>();
    for (std::size_t i = 0; i < m.prep.retained.size(); ++i) {
      m.beta.beta[static_cast<Eigen::Index>(i) + 1] =
          coefs.at(m.prep.retained[i]).get<double>();
    }

    if (j.contains("path")) {
      m.path_lambda = j["path"].at("lambda").get<std::vector<double>>();
      m.path_hgic = j["path"].at("hgic").get<std::vector<double>>();
      m.path_ok = j["path"].at("ok").get<std::vector<int>>();
    }
    if (j.contains("fit")) {
      m.fit.iterations = j["fit"].at("iterations").get<int>();
      m.fit.converged = j["fit"].at("converged").get<bool>();
      m.fit.objective_trace =
          j["fit"].at("objective_trace").get<std::vector<double>>();
      m.fit.clamped_fraction = j["fit"].at("clamped_fraction").get<double>();
    }
    if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad model JSON: ") + e.what());
  }
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << model_to_json(m);
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

EvalReport evaluate(const Model& m, const CsvTable& table) {
  const int ycol = response_column(table);
  const Vector y = binary_response(table, ycol);
  const auto n = table.values.rows();
  if (n < 1) throw DataError("empty evaluation set");

  std::vector<int> idx;
  idx.reserve(m.prep.retained.size());
  for (const std::string& name : m.prep.retained) {
    int found = -1;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (table.columns[j] == name) {
        found = static_cast<int>(j);
        break;
      }
    }
    if (found < 0) throw DataError("evaluation CSV lacks column '" + name + "'");
    idx.push_back(found);
  }

  Vector eta = Vector::Constant(n, m.beta.beta[0]);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    Vector col = table.values.col(idx[c]);
    apply_filter_column(col, m.prep.filter, m.prep.retained[c]);
    const Eigen::Index ci = static_cast<Eigen::Index>(c);
    eta += ((col.array() - m.prep.means[ci]) / m.prep.scales[ci]).matrix() *
           m.beta.beta[ci + 1];
  }

  EvalReport rep;
  rep.n = static_cast<int>(n);
  int correct = 0;
  double absdev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pi = sigmoid(eta[i]);
    const double pred = pi >= 0.5 ? 1.0 : 0.0;
    if (pred == y[i]) ++correct;
    absdev += std::abs(pi - y[i]);
  }
  rep.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  rep.mae = absdev / static_cast<double>(n);
  return rep;
}

}  // namespace awdpd
