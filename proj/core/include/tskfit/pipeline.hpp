#pragma once

#include <span>

#include <Eigen/Core>

#include "tskfit/dataset.hpp"
#include "tskfit/model_file.hpp"
#include "tskfit/table_io.hpp"

namespace tskfit {

struct PreparedData {
  Dataset data;  // model-space inputs, aligned output
  NormalizationSpec normalization;
};

// features -> lag expansion (skipped for the static spec) -> normalization.
PreparedData prepare_training_data(const Dataset& raw, std::span<const FeatureExpr> features, const LagSpec& lag,
                                   NormalizationMode mode);

// Applies a document's recorded transforms to raw columns.
Dataset transform_for_model(const ModelDocument& doc, const Dataset& raw);

// Raw dataset for a document from a table. A missing output column is
// allowed (filled with zeros) unless the document uses lagged outputs.
Dataset dataset_for_model(const ModelDocument& doc, const Table& table, bool require_output);

struct Evaluation {
  Eigen::VectorXd actual;
  Eigen::VectorXd predicted;
  double j = 0.0;
  double relative_error = 0.0;  // J / RMS(actual)
};

Eigen::VectorXd predict(const ModelDocument& doc, const Dataset& raw);
Evaluation evaluate(const ModelDocument& doc, const Dataset& raw);

}  // namespace tskfit
