#include "tskfit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tskfit/error.hpp"

namespace tskfit {

const char* to_string(ExtrapolationPolicy policy) noexcept {
  return policy == ExtrapolationPolicy::Error ? "error" : "nearest-rule";
}

const char* to_string(TNorm tnorm) noexcept { return tnorm == TNorm::Product ? "product" : "min"; }

ExtrapolationPolicy extrapolation_policy_from_string(const std::string& text) {
  if (text == "error") return ExtrapolationPolicy::Error;
  if (text == "nearest-rule") return ExtrapolationPolicy::NearestRule;
  throw Error(ErrorKind::InvalidArgument, "unknown extrapolation policy '" + text + "'");
}

TNorm tnorm_from_string(const std::string& text) {
  if (text == "product") return TNorm::Product;
  if (text == "min") return TNorm::Min;
  throw Error(ErrorKind::InvalidArgument, "unknown t-norm '" + text + "'");
}

double FuzzyRule::consequent(std::span<const double> x) const {
  double y = intercept;
  for (std::size_t j = 0; j < coefficients.size(); ++j) y += coefficients[j] * x[j];
  return y;
}

double rule_weight(const FuzzyRule& rule, std::span<const double> x, TNorm tnorm) {
  double w = 1.0;
  for (const auto& clause : rule.premise) {
    if (clause.variable >= x.size()) {
      throw Error(ErrorKind::ArityMismatch, "premise references variable " + std::to_string(clause.variable) +
                                                " but input has " + std::to_string(x.size()) + " entries");
    }
    const double degree = clause.mf(x[clause.variable]);
    w = tnorm == TNorm::Product ? w * degree : std::min(w, degree);
    if (w == 0.0) break;
  }
  return w;
}

FuzzyModel::FuzzyModel(std::vector<std::string> input_names, std::vector<FuzzyRule> rules,
                       ExtrapolationPolicy policy, TNorm tnorm)
    : input_names_(std::move(input_names)), rules_(std::move(rules)), policy_(policy), tnorm_(tnorm) {
  if (rules_.empty()) throw Error(ErrorKind::InvalidArgument, "a fuzzy model needs at least one rule");
  const std::size_t m = input_names_.size();
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    auto& rule = rules_[r];
    const std::string where = "rule " + std::to_string(r + 1);
    if (rule.coefficients.size() != m) {
      throw Error(ErrorKind::ArityMismatch, where + " has " + std::to_string(rule.coefficients.size()) +
                                                " coefficients, model arity is " + std::to_string(m));
    }
    if (rule.active.empty()) rule.active.assign(m, true);
    if (rule.active.size() != m) throw Error(ErrorKind::ArityMismatch, where + " active mask length mismatch");
    if (!std::isfinite(rule.intercept)) throw Error(ErrorKind::NonFinite, where + " intercept is not finite");
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(rule.coefficients[j])) throw Error(ErrorKind::NonFinite, where + " coefficient not finite");
      if (!rule.active[j] && rule.coefficients[j] != 0.0) {
        throw Error(ErrorKind::InvalidArgument, where + " has a nonzero coefficient on an eliminated variable");
      }
    }
    for (const auto& clause : rule.premise) {
      if (clause.variable >= m) {
        throw Error(ErrorKind::ArityMismatch, where + " premise references variable index " +
                                                  std::to_string(clause.variable) + " outside arity " +
                                                  std::to_string(m));
      }
      for (double p : clause.mf.params()) {
        lo[clause.variable] = std::min(lo[clause.variable], p);
        hi[clause.variable] = std::max(hi[clause.variable], p);
      }
    }
  }
  variable_span_.resize(m, 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (hi[j] > lo[j]) variable_span_[j] = hi[j] - lo[j];
  }
}

void FuzzyModel::check_input(std::span<const double> x) const {
  if (x.size() != arity()) {
    throw Error(ErrorKind::ArityMismatch,
                "input has " + std::to_string(x.size()) + " entries, model arity is " + std::to_string(arity()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "input contains a non-finite value");
  }
}

std::vector<double> FuzzyModel::weights(std::span<const double> x) const {
  check_input(x);
  std::vector<double> w(rules_.size());
  for (std::size_t r = 0; r < rules_.size(); ++r) w[r] = rule_weight(rules_[r], x, tnorm_);
  return w;
}

std::size_t FuzzyModel::nearest_rule(std::span<const double> x) const {
  check_input(x);
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    double d2 = 0.0;
    for (const auto& clause : rules_[r].premise) {
      const double d = (x[clause.variable] - clause.mf.midpoint()) / variable_span_[clause.variable];
      d2 += d * d;
    }
    if (d2 < best_dist) {
      best_dist = d2;
      best = r;
    }
  }
  return best;
}

double FuzzyModel::infer(std::span<const double> x) const {
  const auto w = weights(x);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    if (w[r] == 0.0) continue;
    num += w[r] * rules_[r].consequent(x);
    den += w[r];
  }
  if (den > 0.0) return num / den;
  if (policy_ == ExtrapolationPolicy::Error) {
    throw Error(ErrorKind::UncoveredInput, "no rule fires for this input (total firing strength is zero)");
  }
  return rules_[nearest_rule(x)].consequent(x);
}

Eigen::VectorXd FuzzyModel::infer_batch(const Eigen::MatrixXd& rows) const {
  Eigen::VectorXd out(rows.rows());
  std::vector<double> x(static_cast<std::size_t>(rows.cols()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) x[static_cast<std::size_t>(j)] = rows(i, j);
    try {
      out(i) = infer(x);
    } catch (const Error& e) {
      throw e.with_row(static_cast<std::size_t>(i) + 1);
    }
  }
  return out;
}

double infer(const FuzzyModel& model, std::span<const double> x) { return model.infer(x); }

Eigen::VectorXd infer_batch(const FuzzyModel& model, const Eigen::MatrixXd& rows) { return model.infer_batch(rows); }

}  // namespace tskfit
