#include "tskfit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tskfit/error.hpp"

namespace tskfit {

namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

Correlation pearson_corr(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::ArityMismatch, "pearson_corr: length mismatch");
  if (x.size() < 2) throw Error(ErrorKind::TooFewRows, "pearson_corr: need at least two samples");
  if (is_constant(x) || is_constant(y)) return {0.0, true};
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return {0.0, true};
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

Correlation pearson_corr(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return pearson_corr(as_span(x), as_span(y));
}

std::vector<std::size_t> CorrelationTable::ranking() const {
  std::vector<std::size_t> order(output_corr.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(output_corr[a]) > std::abs(output_corr[b]); });
  return order;
}

Dataset eval_features(const Dataset& ds, std::span<const FeatureExpr> exprs) {
  const auto p = static_cast<Eigen::Index>(ds.rows());
  Eigen::MatrixXd out(p, static_cast<Eigen::Index>(exprs.size()));
  std::vector<std::string> names;
  for (std::size_t f = 0; f < exprs.size(); ++f) {
    const auto& expr = exprs[f];
    std::vector<std::size_t> columns;
    for (const auto& var : expr.variables()) {
      auto idx = ds.input_index(var);
      if (!idx) {
        throw Error(ErrorKind::MissingColumn,
                    "feature '" + expr.name() + "' references unknown column '" + var + "'");
      }
      columns.push_back(*idx);
    }
    std::vector<double> values(columns.size());
    for (Eigen::Index i = 0; i < p; ++i) {
      for (std::size_t k = 0; k < columns.size(); ++k) values[k] = ds.inputs()(i, static_cast<Eigen::Index>(columns[k]));
      try {
        out(i, static_cast<Eigen::Index>(f)) = expr.evaluate(values);
      } catch (const Error& e) {
        throw e.with_row(static_cast<std::size_t>(i) + 1);
      }
    }
    names.push_back(expr.name());
  }
  return Dataset(std::move(names), ds.output_name(), std::move(out), ds.output());
}

CorrelationTable corr_matrix(const Dataset& ds, std::span<const FeatureExpr> features) {
  const Dataset table = features.empty() ? ds : eval_features(ds, features);
  const auto m = static_cast<Eigen::Index>(table.arity());
  CorrelationTable result;
  result.names = table.input_names();
  result.matrix = Eigen::MatrixXd::Zero(m, m);
  result.output_corr.resize(static_cast<std::size_t>(m));
  result.degenerate.resize(static_cast<std::size_t>(m));
  std::vector<Eigen::VectorXd> cols;
  for (Eigen::Index j = 0; j < m; ++j) cols.emplace_back(table.inputs().col(j));
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto self = pearson_corr(cols[a], cols[a]);
    result.degenerate[static_cast<std::size_t>(a)] = self.degenerate;
    result.matrix(a, a) = self.degenerate ? 0.0 : 1.0;
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const double r = pearson_corr(cols[a], cols[b]).r;
      result.matrix(a, b) = r;
      result.matrix(b, a) = r;
    }
    result.output_corr[static_cast<std::size_t>(a)] = pearson_corr(cols[a], table.output()).r;
  }
  return result;
}

std::vector<std::size_t> correlation_ranking(const Dataset& ds) { return corr_matrix(ds).ranking(); }

const char* to_string(NormalizationMode mode) noexcept {
  return mode == NormalizationMode::None ? "none" : "minmax";
}

NormalizationMode normalization_mode_from_string(const std::string& text) {
  if (text == "none") return NormalizationMode::None;
  if (text == "minmax") return NormalizationMode::MinMax;
  throw Error(ErrorKind::InvalidArgument, "unknown normalization mode '" + text + "'");
}

NormalizationSpec::NormalizationSpec(std::vector<ColumnScaling> columns) : columns_(std::move(columns)) {
  for (const auto& c : columns_) {
    if (c.mode == NormalizationMode::MinMax && !(c.max > c.min)) {
      throw Error(ErrorKind::ConstantColumn, "normalization of column '" + c.name + "' needs max > min");
    }
  }
}

NormalizationSpec NormalizationSpec::identity(const std::vector<std::string>& names) {
  std::vector<ColumnScaling> cols;
  for (const auto& n : names) cols.push_back({n, NormalizationMode::None, 0.0, 1.0});
  return NormalizationSpec(std::move(cols));
}

bool NormalizationSpec::is_identity() const noexcept {
  return std::all_of(columns_.begin(), columns_.end(),
                     [](const ColumnScaling& c) { return c.mode == NormalizationMode::None; });
}

void NormalizationSpec::check_columns(const Dataset& ds) const {
  if (ds.arity() != columns_.size()) {
    throw Error(ErrorKind::ArityMismatch, "normalization covers " + std::to_string(columns_.size()) +
                                              " columns, dataset has " + std::to_string(ds.arity()));
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].name != ds.input_names()[j]) {
      throw Error(ErrorKind::MissingColumn, "normalization expects column '" + columns_[j].name + "' at position " +
                                                std::to_string(j + 1) + ", found '" + ds.input_names()[j] + "'");
    }
  }
}

void NormalizationSpec::apply_in_place(std::span<double> x) const {
  if (x.size() != columns_.size()) throw Error(ErrorKind::ArityMismatch, "normalization arity mismatch");
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& c = columns_[j];
    if (c.mode == NormalizationMode::MinMax) x[j] = (x[j] - c.min) / (c.max - c.min);
  }
}

Dataset NormalizationSpec::apply(const Dataset& ds) const {
  check_columns(ds);
  Eigen::MatrixXd x = ds.inputs();
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& c = columns_[j];
    if (c.mode == NormalizationMode::MinMax) {
      x.col(static_cast<Eigen::Index>(j)) = (x.col(static_cast<Eigen::Index>(j)).array() - c.min) / (c.max - c.min);
    }
  }
  return Dataset(ds.input_names(), ds.output_name(), std::move(x), ds.output());
}

Dataset NormalizationSpec::invert(const Dataset& ds) const {
  check_columns(ds);
  Eigen::MatrixXd x = ds.inputs();
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& c = columns_[j];
    if (c.mode == NormalizationMode::MinMax) {
      x.col(static_cast<Eigen::Index>(j)) = x.col(static_cast<Eigen::Index>(j)).array() * (c.max - c.min) + c.min;
    }
  }
  return Dataset(ds.input_names(), ds.output_name(), std::move(x), ds.output());
}

std::pair<Dataset, NormalizationSpec> normalize(const Dataset& ds, NormalizationMode mode) {
  if (mode == NormalizationMode::None) return {ds, NormalizationSpec::identity(ds.input_names())};
  std::vector<ColumnScaling> cols;
  for (std::size_t j = 0; j < ds.arity(); ++j) {
    const auto col = ds.inputs().col(static_cast<Eigen::Index>(j));
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    if (!(hi > lo)) {
      throw Error(ErrorKind::ConstantColumn, "column '" + ds.input_names()[j] + "' is constant; cannot min-max scale");
    }
    cols.push_back({ds.input_names()[j], NormalizationMode::MinMax, lo, hi});
  }
  NormalizationSpec spec(std::move(cols));
  return {spec.apply(ds), spec};
}

double performance_J(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) throw Error(ErrorKind::ArityMismatch, "performance_J: length mismatch");
  if (y.empty()) throw Error(ErrorKind::TooFewRows, "performance_J: empty input");
  double sum = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double e = y[k] - yhat[k];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(y.size()));
}

double performance_J(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  return performance_J(as_span(y), as_span(yhat));
}

double rms(const Eigen::VectorXd& y) {
  if (y.size() == 0) throw Error(ErrorKind::TooFewRows, "rms of empty vector");
  return std::sqrt(y.squaredNorm() / static_cast<double>(y.size()));
}

}  // namespace tskfit
