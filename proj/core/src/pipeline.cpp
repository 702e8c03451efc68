#include "tskfit/pipeline.hpp"

#include <algorithm>
#include <limits>

#include "tskfit/error.hpp"
#include "tskfit/stats.hpp"

namespace tskfit {

PreparedData prepare_training_data(const Dataset& raw, std::span<const FeatureExpr> features, const LagSpec& lag,
                                   NormalizationMode mode) {
  Dataset staged = features.empty() ? raw : eval_features(raw, features);
  if (!lag.is_static()) staged = lag_expand(staged, lag);
  auto [normalized, spec] = normalize(staged, mode);
  return {std::move(normalized), std::move(spec)};
}

namespace {

// Raw columns a document reads when it has no feature expressions.
std::vector<std::string> raw_columns(const ModelDocument& doc) {
  if (doc.lag.is_static()) return doc.model.input_names();
  std::vector<std::string> out;
  for (const auto& name : doc.model.input_names()) {
    const auto base = name.substr(0, name.rfind("[t-"));
    if (base != doc.output_name && std::find(out.begin(), out.end(), base) == out.end()) out.push_back(base);
  }
  return out;
}

Dataset select_inputs(const Dataset& raw, const std::vector<std::string>& names) {
  if (raw.input_names() == names) return raw;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(raw.rows()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto idx = raw.input_index(names[j]);
    if (!idx) throw Error(ErrorKind::MissingColumn, "column '" + names[j] + "' required by the model is missing");
    x.col(static_cast<Eigen::Index>(j)) = raw.inputs().col(static_cast<Eigen::Index>(*idx));
  }
  return Dataset(names, raw.output_name(), std::move(x), raw.output());
}

}  // namespace

Dataset transform_for_model(const ModelDocument& doc, const Dataset& raw) {
  Dataset staged = doc.features.empty() ? select_inputs(raw, raw_columns(doc)) : eval_features(raw, doc.features);
  if (!doc.lag.is_static()) staged = lag_expand(staged, doc.lag);
  if (!doc.normalization.columns().empty()) staged = doc.normalization.apply(staged);
  if (staged.input_names() != doc.model.input_names()) {
    std::string expected;
    for (const auto& n : doc.model.input_names()) expected += (expected.empty() ? "" : ",") + n;
    throw Error(ErrorKind::MissingColumn, "data columns do not match the model inputs (" + expected + ")");
  }
  return staged;
}

Dataset dataset_for_model(const ModelDocument& doc, const Table& table, bool require_output) {
  const bool has_output =
      std::find(table.names.begin(), table.names.end(), doc.output_name) != table.names.end();
  if (has_output) return table.to_dataset(doc.output_name);
  if (require_output || doc.lag.na > 0) {
    throw Error(ErrorKind::MissingColumn, "output column '" + doc.output_name + "' not found in data");
  }
  return Dataset(table.names, doc.output_name, table.values, Eigen::VectorXd::Zero(table.values.rows()));
}

Eigen::VectorXd predict(const ModelDocument& doc, const Dataset& raw) {
  return doc.model.infer_batch(transform_for_model(doc, raw).inputs());
}

Evaluation evaluate(const ModelDocument& doc, const Dataset& raw) {
  const Dataset data = transform_for_model(doc, raw);
  Evaluation ev;
  ev.actual = data.output();
  ev.predicted = doc.model.infer_batch(data.inputs());
  ev.j = performance_J(ev.actual, ev.predicted);
  const double scale = rms(ev.actual);
  ev.relative_error = scale > 0.0 ? ev.j / scale : (ev.j == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return ev;
}

}  // namespace tskfit
