#pragma once

#include <map>
#include <string>
#include <vector>

#include "tskfit/feature_expr.hpp"
#include "tskfit/identify.hpp"
#include "tskfit/stats.hpp"

namespace tskfit {

// Everything a fit run learned, in a form that can be re-checked against
// the written model file and the input data.
struct FitReport {
  std::string dataset_digest;
  std::size_t rows = 0;
  std::vector<std::string> model_inputs;
  std::string output_name;
  CorrelationTable correlation;
  std::vector<FeatureExpr> features;
  SearchTrace trace;
  std::string final_structure;
  std::size_t final_rules = 0;
  double final_j = 0.0;
  double final_relative_error = 0.0;
  std::vector<EliminationResult> eliminations;
  FuzzyRule baseline_rule;
  double baseline_j = 0.0;
  double baseline_relative_error = 0.0;
  std::map<std::string, std::string> config;
};

// Canonical JSON (sorted keys, shortest round-trip numbers, trailing newline).
std::string serialize_report(const FitReport& report);

// JSON text of the search trace alone; its digest_hex() is recorded in
// the model's provenance block.
std::string serialize_trace(const SearchTrace& trace, const std::vector<std::string>& names);

}  // namespace tskfit
