#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tskfit/feature_expr.hpp"
#include "tskfit/model.hpp"
#include "tskfit/regress.hpp"
#include "tskfit/stats.hpp"

namespace tskfit {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFormatName = "tskfit-model";
inline constexpr std::string_view kModelFileExtension = ".tskmodel.json";

// Everything needed to go from raw table columns to a prediction:
// features -> lag expansion -> normalization -> fuzzy inference.
struct ModelDocument {
  int version = kModelFormatVersion;
  std::string output_name = "y";
  std::vector<FeatureExpr> features;  // empty: the model reads raw columns
  LagSpec lag;
  NormalizationSpec normalization;
  FuzzyModel model;
  std::map<std::string, std::string> provenance;
  std::string comment;

  friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

// Canonical JSON text: sorted keys, two-space indent, shortest round-trip
// numbers, trailing newline. serialize(parse(serialize(d))) == serialize(d).
std::string serialize_model(const ModelDocument& doc);

// Throws VersionMismatch for an unknown format version and SchemaViolation
// naming the offending field path (e.g. "rules[2].premise[0].params").
ModelDocument parse_model(std::string_view text);

void write_model(const ModelDocument& doc, const std::filesystem::path& path);
ModelDocument read_model(const std::filesystem::path& path);

}  // namespace tskfit
