#include "tskfit/model_file.hpp"

#include <set>

#include <json.hpp>

#include "tskfit/error.hpp"
#include "tskfit/table_io.hpp"

namespace tskfit {

using nlohmann::json;

namespace {

[[noreturn]] void violation(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaViolation, "model file field '" + path + "': " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) violation(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

void expect_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) violation(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) violation(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) violation(path, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) violation(path, "expected a string");
  return v.get<std::string>();
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    violation(path, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) violation(path, "expected an array");
  return v;
}

template <typename Fn>
auto rethrow_as_violation(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaViolation) throw;
    violation(path, e.what());
  }
}

}  // namespace

std::string serialize_model(const ModelDocument& doc) {
  const auto& names = doc.model.input_names();
  json j;
  j["format"] = std::string(kModelFormatName);
  j["version"] = doc.version;
  j["output"] = doc.output_name;
  j["inputs"] = names;
  j["comment"] = doc.comment;
  j["provenance"] = json::object();
  for (const auto& [k, v] : doc.provenance) j["provenance"][k] = v;
  j["features"] = json::array();
  for (const auto& f : doc.features) j["features"].push_back({{"name", f.name()}, {"expr", f.text()}});
  j["lag"] = {{"na", doc.lag.na}, {"nb", doc.lag.nb}};
  j["normalization"] = json::array();
  for (const auto& c : doc.normalization.columns()) {
    j["normalization"].push_back({{"column", c.name}, {"mode", to_string(c.mode)}, {"min", c.min}, {"max", c.max}});
  }
  j["inference"] = {{"extrapolation", to_string(doc.model.policy())}, {"tnorm", to_string(doc.model.tnorm())}};
  j["rules"] = json::array();
  for (const auto& rule : doc.model.rules()) {
    json r;
    r["intercept"] = rule.intercept;
    r["coefficients"] = rule.coefficients;
    r["active"] = rule.active;
    r["premise"] = json::array();
    for (const auto& clause : rule.premise) {
      const auto params = clause.mf.params();
      r["premise"].push_back({{"variable", names[clause.variable]},
                              {"kind", to_string(clause.mf.kind())},
                              {"params", std::vector<double>(params.begin(), params.end())}});
    }
    j["rules"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

ModelDocument parse_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) violation("<root>", "expected an object");
  if (as_string(field(j, "format", ""), "format") != kModelFormatName) violation("format", "not a tskfit model file");
  const auto& version = field(j, "version", "");
  if (!version.is_number_integer()) violation("version", "expected an integer");
  if (version.get<int>() != kModelFormatVersion) {
    throw Error(ErrorKind::VersionMismatch, "model file version " + std::to_string(version.get<int>()) +
                                                " is not supported (expected " + std::to_string(kModelFormatVersion) +
                                                ")");
  }
  expect_keys(j,
              {"format", "version", "output", "inputs", "comment", "provenance", "features", "lag", "normalization",
               "inference", "rules"},
              "");

  std::vector<std::string> names;
  const auto& inputs = as_array(field(j, "inputs", ""), "inputs");
  for (std::size_t i = 0; i < inputs.size(); ++i) names.push_back(as_string(inputs[i], "inputs[" + std::to_string(i) + "]"));
  auto index_of = [&](const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    violation(path, "unknown input '" + name + "'");
  };

  std::map<std::string, std::string> provenance;
  const auto& prov = field(j, "provenance", "");
  if (!prov.is_object()) violation("provenance", "expected an object");
  for (const auto& [k, v] : prov.items()) provenance[k] = as_string(v, "provenance." + k);

  std::vector<FeatureExpr> features;
  const auto& feats = as_array(field(j, "features", ""), "features");
  for (std::size_t i = 0; i < feats.size(); ++i) {
    const std::string path = "features[" + std::to_string(i) + "]";
    expect_keys(feats[i], {"name", "expr"}, path);
    const auto name = as_string(field(feats[i], "name", path), path + ".name");
    const auto expr = as_string(field(feats[i], "expr", path), path + ".expr");
    features.push_back(rethrow_as_violation(path, [&] { return FeatureExpr::parse(expr, name); }));
  }

  const auto& lag_obj = field(j, "lag", "");
  expect_keys(lag_obj, {"na", "nb"}, "lag");
  LagSpec lag{as_count(field(lag_obj, "na", "lag"), "lag.na"), as_count(field(lag_obj, "nb", "lag"), "lag.nb")};
  if (lag.nb < 1) violation("lag.nb", "must be at least 1");

  std::vector<ColumnScaling> scaling;
  const auto& norm = as_array(field(j, "normalization", ""), "normalization");
  for (std::size_t i = 0; i < norm.size(); ++i) {
    const std::string path = "normalization[" + std::to_string(i) + "]";
    expect_keys(norm[i], {"column", "mode", "min", "max"}, path);
    ColumnScaling c;
    c.name = as_string(field(norm[i], "column", path), path + ".column");
    c.mode = rethrow_as_violation(path + ".mode", [&] {
      return normalization_mode_from_string(as_string(field(norm[i], "mode", path), path + ".mode"));
    });
    c.min = as_real(field(norm[i], "min", path), path + ".min");
    c.max = as_real(field(norm[i], "max", path), path + ".max");
    scaling.push_back(std::move(c));
  }
  auto normalization = rethrow_as_violation("normalization", [&] { return NormalizationSpec(std::move(scaling)); });

  const auto& inference = field(j, "inference", "");
  expect_keys(inference, {"extrapolation", "tnorm"}, "inference");
  const auto policy = rethrow_as_violation("inference.extrapolation", [&] {
    return extrapolation_policy_from_string(
        as_string(field(inference, "extrapolation", "inference"), "inference.extrapolation"));
  });
  const auto tnorm = rethrow_as_violation("inference.tnorm", [&] {
    return tnorm_from_string(as_string(field(inference, "tnorm", "inference"), "inference.tnorm"));
  });

  std::vector<FuzzyRule> rules;
  const auto& rules_json = as_array(field(j, "rules", ""), "rules");
  if (rules_json.empty()) violation("rules", "a model needs at least one rule");
  for (std::size_t r = 0; r < rules_json.size(); ++r) {
    const std::string path = "rules[" + std::to_string(r) + "]";
    const auto& rj = rules_json[r];
    expect_keys(rj, {"intercept", "coefficients", "active", "premise"}, path);
    FuzzyRule rule;
    rule.intercept = as_real(field(rj, "intercept", path), path + ".intercept");
    const auto& coeffs = as_array(field(rj, "coefficients", path), path + ".coefficients");
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
      rule.coefficients.push_back(as_real(coeffs[c], path + ".coefficients[" + std::to_string(c) + "]"));
    }
    const auto& active = as_array(field(rj, "active", path), path + ".active");
    for (std::size_t c = 0; c < active.size(); ++c) {
      if (!active[c].is_boolean()) violation(path + ".active[" + std::to_string(c) + "]", "expected a boolean");
      rule.active.push_back(active[c].get<bool>());
    }
    const auto& premise = as_array(field(rj, "premise", path), path + ".premise");
    for (std::size_t c = 0; c < premise.size(); ++c) {
      const std::string cpath = path + ".premise[" + std::to_string(c) + "]";
      expect_keys(premise[c], {"variable", "kind", "params"}, cpath);
      const auto var = index_of(as_string(field(premise[c], "variable", cpath), cpath + ".variable"), cpath + ".variable");
      std::vector<double> params;
      const auto& pj = as_array(field(premise[c], "params", cpath), cpath + ".params");
      for (std::size_t k = 0; k < pj.size(); ++k) params.push_back(as_real(pj[k], cpath + ".params[" + std::to_string(k) + "]"));
      auto mf = rethrow_as_violation(cpath, [&] {
        return MembershipFunction(membership_kind_from_string(as_string(field(premise[c], "kind", cpath), cpath + ".kind")),
                                  std::move(params));
      });
      rule.premise.push_back({var, std::move(mf)});
    }
    rules.push_back(std::move(rule));
  }
  auto model = rethrow_as_violation("rules", [&] { return FuzzyModel(names, std::move(rules), policy, tnorm); });

  ModelDocument doc{kModelFormatVersion,
                    as_string(field(j, "output", ""), "output"),
                    std::move(features),
                    lag,
                    std::move(normalization),
                    std::move(model),
                    std::move(provenance),
                    as_string(field(j, "comment", ""), "comment")};
  if (!doc.normalization.columns().empty()) {
    if (doc.normalization.columns().size() != names.size()) violation("normalization", "must cover every input");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (doc.normalization.columns()[i].name != names[i]) {
        violation("normalization[" + std::to_string(i) + "].column", "expected '" + names[i] + "'");
      }
    }
  }
  return doc;
}

void write_model(const ModelDocument& doc, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(doc));
}

ModelDocument read_model(const std::filesystem::path& path) { return parse_model(read_text_file(path)); }

}  // namespace tskfit
