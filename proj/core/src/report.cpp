#include "tskfit/report.hpp"

#include <json.hpp>

namespace tskfit {

using nlohmann::json;

namespace {

std::string name_of(const std::vector<std::string>& names, std::size_t index) {
  return index < names.size() ? names[index] : "x" + std::to_string(index + 1);
}

json trace_json(const SearchTrace& trace, const std::vector<std::string>& names) {
  json j;
  j["seed_mode"] = to_string(trace.seed_mode);
  j["seed_fallback"] = trace.seed_fallback;
  j["stop_reason"] = to_string(trace.stop);
  j["best_step"] = trace.best_step + 1;
  j["zero_tolerance"] = trace.zero_tolerance;
  j["total_evaluations"] = trace.total_evaluations();
  j["correlation_ranking"] = json::array();
  for (auto v : trace.correlation_ranking) j["correlation_ranking"].push_back(name_of(names, v));
  j["steps"] = json::array();
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const auto& step = trace.steps[s];
    json sj;
    sj["step"] = s + 1;
    sj["rules"] = step.rules;
    sj["j"] = step.j;
    sj["selected"] = step.selected;
    sj["stop_value"] = step.stop_value ? json(*step.stop_value) : json(nullptr);
    sj["candidates"] = json::array();
    for (const auto& c : step.candidates) {
      sj["candidates"].push_back({{"kind", to_string(c.kind)},
                                  {"structure", c.encoding},
                                  {"digest", digest_hex(c.encoding)},
                                  {"j", c.j},
                                  {"subspace", c.subspace},
                                  {"variable", c.kind == CandidateKind::Root ? json(nullptr) : json(name_of(names, c.variable))},
                                  {"parts", c.parts},
                                  {"premise_variables", c.premise_variable_count}});
    }
    j["steps"].push_back(std::move(sj));
  }
  return j;
}

}  // namespace

std::string serialize_trace(const SearchTrace& trace, const std::vector<std::string>& names) {
  return trace_json(trace, names).dump();
}

std::string serialize_report(const FitReport& report) {
  json j;
  j["dataset"] = {{"digest", report.dataset_digest},
                  {"rows", report.rows},
                  {"model_inputs", report.model_inputs},
                  {"output", report.output_name}};

  json corr;
  corr["names"] = report.correlation.names;
  corr["output"] = report.correlation.output_corr;
  corr["degenerate"] = report.correlation.degenerate;
  corr["matrix"] = json::array();
  for (Eigen::Index r = 0; r < report.correlation.matrix.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(report.correlation.matrix.cols()));
    for (Eigen::Index c = 0; c < report.correlation.matrix.cols(); ++c) row[static_cast<std::size_t>(c)] = report.correlation.matrix(r, c);
    corr["matrix"].push_back(row);
  }
  corr["ranking"] = json::array();
  for (auto idx : report.correlation.ranking()) corr["ranking"].push_back(report.correlation.names[idx]);
  j["correlation"] = std::move(corr);

  j["features"] = json::array();
  for (const auto& f : report.features) j["features"].push_back({{"name", f.name()}, {"expr", f.text()}});

  j["search"] = trace_json(report.trace, report.model_inputs);

  j["final"] = {{"structure", report.final_structure},
                {"rules", report.final_rules},
                {"j", report.final_j},
                {"relative_error", report.final_relative_error}};

  j["eliminations"] = json::array();
  for (const auto& elim : report.eliminations) {
    json steps = json::array();
    for (const auto& s : elim.trace) {
      steps.push_back({{"removed", s.name}, {"j_before", s.j_before}, {"j_after", s.j_after}});
    }
    j["eliminations"].push_back(std::move(steps));
  }

  j["baseline"] = {{"j", report.baseline_j},
                   {"relative_error", report.baseline_relative_error},
                   {"intercept", report.baseline_rule.intercept},
                   {"coefficients", report.baseline_rule.coefficients},
                   {"active", report.baseline_rule.active}};

  j["config"] = json::object();
  for (const auto& [k, v] : report.config) j["config"][k] = v;
  return j.dump(2) + "\n";
}

}  // namespace tskfit
