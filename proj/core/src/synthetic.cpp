#include "tskfit/synthetic.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "tskfit/error.hpp"
#include "tskfit/pipeline.hpp"

namespace tskfit {

std::vector<std::string> generator_columns(const ModelDocument& truth) {
  if (truth.features.empty()) return truth.model.input_names();
  std::vector<std::string> cols;
  for (const auto& f : truth.features) {
    for (const auto& v : f.variables()) {
      if (std::find(cols.begin(), cols.end(), v) == cols.end()) cols.push_back(v);
    }
  }
  return cols;
}

namespace {

InputRange default_range(const ModelDocument& truth, const std::string& column) {
  if (!truth.features.empty()) return {column, 0.0, 1.0};
  const auto& names = truth.model.input_names();
  const auto var = static_cast<std::size_t>(std::find(names.begin(), names.end(), column) - names.begin());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& rule : truth.model.rules()) {
    for (const auto& clause : rule.premise) {
      if (clause.variable != var) continue;
      lo = std::min(lo, clause.mf.params().front());
      hi = std::max(hi, clause.mf.params().back());
    }
  }
  if (!(hi > lo)) return {column, 0.0, 1.0};
  const double pad = 0.1 * (hi - lo);
  return {column, lo - pad, hi + pad};
}

}  // namespace

Dataset gen_synthetic(const GeneratorSpec& spec) {
  if (!(spec.noise_sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "noise sigma must be >= 0");
  if (spec.samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  if (!spec.truth.lag.is_static()) {
    throw Error(ErrorKind::InvalidArgument, "synthetic generation supports static (unlagged) models only");
  }
  const auto columns = generator_columns(spec.truth);
  std::vector<InputRange> ranges;
  for (const auto& col : columns) {
    auto it = std::find_if(spec.ranges.begin(), spec.ranges.end(), [&](const InputRange& r) { return r.name == col; });
    ranges.push_back(it != spec.ranges.end() ? *it : default_range(spec.truth, col));
    if (!(ranges.back().high >= ranges.back().low)) {
      throw Error(ErrorKind::InvalidArgument, "range for '" + col + "' has high < low");
    }
  }
  for (const auto& r : spec.ranges) {
    if (std::find(columns.begin(), columns.end(), r.name) == columns.end()) {
      throw Error(ErrorKind::MissingColumn, "range given for '" + r.name + "', which the model does not read");
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto p = static_cast<Eigen::Index>(spec.samples);
  Eigen::MatrixXd x(p, static_cast<Eigen::Index>(columns.size()));
  for (Eigen::Index i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      x(i, static_cast<Eigen::Index>(j)) = ranges[j].low + (ranges[j].high - ranges[j].low) * unit(rng);
    }
  }
  Dataset raw(columns, spec.truth.output_name, std::move(x), Eigen::VectorXd::Zero(p));
  Eigen::VectorXd y = predict(spec.truth, raw);
  if (spec.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (Eigen::Index i = 0; i < p; ++i) y(i) += noise(rng);
  }
  return raw.with_output(std::move(y));
}

}  // namespace tskfit
