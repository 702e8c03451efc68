#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tskfit/dataset.hpp"
#include "tskfit/feature_expr.hpp"

namespace tskfit {

struct Correlation {
  double r = 0.0;
  // Set when either argument has zero variance; r is then 0.
  bool degenerate = false;
};

// Sample Pearson correlation, clamped to [-1, 1].
Correlation pearson_corr(std::span<const double> x, std::span<const double> y);
Correlation pearson_corr(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct CorrelationTable {
  std::vector<std::string> names;
  Eigen::MatrixXd matrix;            // symmetric, unit diagonal except degenerate columns
  std::vector<double> output_corr;   // corr(column, output)
  std::vector<bool> degenerate;      // column has zero variance

  // Column indices by descending |corr with output|; ties keep the lower index.
  std::vector<std::size_t> ranking() const;
};

// Evaluate `exprs` over the input columns; the output column is carried over.
// Errors carry the 1-based row and the failing expression.
Dataset eval_features(const Dataset& ds, std::span<const FeatureExpr> exprs);

// Correlations among the evaluated features (or the raw inputs when `features`
// is empty) and against the output.
CorrelationTable corr_matrix(const Dataset& ds, std::span<const FeatureExpr> features = {});

// Indices of the input columns by descending |pearson_corr(column, output)|.
std::vector<std::size_t> correlation_ranking(const Dataset& ds);

enum class NormalizationMode { None, MinMax };

const char* to_string(NormalizationMode mode) noexcept;
NormalizationMode normalization_mode_from_string(const std::string& text);

struct ColumnScaling {
  std::string name;
  NormalizationMode mode = NormalizationMode::None;
  double min = 0.0;
  double max = 1.0;

  friend bool operator==(const ColumnScaling&, const ColumnScaling&) = default;
};

// Per-input-column affine map onto [0, 1]; the output is never rescaled.
class NormalizationSpec {
 public:
  NormalizationSpec() = default;
  explicit NormalizationSpec(std::vector<ColumnScaling> columns);

  static NormalizationSpec identity(const std::vector<std::string>& names);

  const std::vector<ColumnScaling>& columns() const noexcept { return columns_; }
  bool is_identity() const noexcept;

  Dataset apply(const Dataset& ds) const;
  Dataset invert(const Dataset& ds) const;
  void apply_in_place(std::span<double> x) const;

  friend bool operator==(const NormalizationSpec&, const NormalizationSpec&) = default;

 private:
  void check_columns(const Dataset& ds) const;

  std::vector<ColumnScaling> columns_;
};

// Throws ConstantColumn(name) under MinMax when a column has max == min.
std::pair<Dataset, NormalizationSpec> normalize(const Dataset& ds, NormalizationMode mode);

// Root-mean-square error sqrt((1/p) * sum_k (y_k - yhat_k)^2).
double performance_J(std::span<const double> y, std::span<const double> yhat);
double performance_J(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

// sqrt(mean(y^2)); the denominator of the relative error J / RMS(y).
double rms(const Eigen::VectorXd& y);

}  // namespace tskfit
