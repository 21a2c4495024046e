#pragma once

#include <optional>
#include <string>
#include <vector>

#include "awdpd/irls.hpp"
#include "awdpd/types.hpp"

namespace awdpd {

// Numeric CSV with a header row; the response column is named "y".
struct CsvTable {
  std::vector<std::string> columns;
  Matrix values;  // n x columns.size()
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

enum class LogTransform { None, Log2, Log10 };

// Gene-filtering pipeline options: clamp, log-transform, then keep columns
// whose |Pearson correlation| with the response exceeds the threshold.
struct FilterSpec {
  std::optional<double> floor;
  std::optional<double> ceiling;
  LogTransform transform = LogTransform::None;
  std::optional<double> corr_threshold;  // in (0,1) when present
};

// Everything needed to reproduce the design matrix from a raw CSV: the
// filter, the retained column names in order, and the standardization.
struct Preprocessing {
  FilterSpec filter;
  std::vector<std::string> retained;
  Vector means;
  Vector scales;
};

struct IngestResult {
  Dataset data;
  Preprocessing prep;
};

// Clamp -> transform -> drop zero-variance columns -> correlation filter ->
// standardize. Throws DataError on a non-binary response or when nothing
// survives the filter.
IngestResult ingest(const std::string& csv_path, const FilterSpec& filter);
IngestResult ingest_table(const CsvTable& table, const FilterSpec& filter);

// Serializable fitted model: coefficients live on the standardized scale and
// pair with the stored preprocessing.
struct Model {
  std::string schema = "awdpd-model/1";
  double alpha = 0.0;
  double lambda_star = 0.0;
  WeightScheme scheme;
  Coefficients beta;  // aligned with prep.retained, index 0 = intercept
  Preprocessing prep;
  std::vector<double> path_lambda;  // empty for single fits
  std::vector<double> path_hgic;
  std::vector<int> path_ok;
  FitResult fit;
  std::uint64_t seed = 0;
};

std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);
void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

struct EvalReport {
  double accuracy = 0.0;
  double mae = 0.0;  // mean |predicted probability - label|
  int n = 0;
};

// Applies the stored preprocessing to a raw CSV and scores the model:
// classification at 0.5 for accuracy, probability-vs-label absolute error
// for MAE. Throws DataError when retained columns are missing.
EvalReport evaluate(const Model& m, const CsvTable& table);

std::string format_double(double v);  // 17 significant digits

}  // namespace awdpd
