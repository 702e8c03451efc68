#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tskfit/membership.hpp"

namespace tskfit {

struct PremiseClause {
  std::size_t variable = 0;
  MembershipFunction mf;

  friend bool operator==(const PremiseClause&, const PremiseClause&) = default;
};

// IF <premise> THEN y = intercept + coefficients . x
//
// An empty premise fires with weight 1 everywhere. `active` marks which
// consequent variables survived elimination; inactive coefficients are 0.
struct FuzzyRule {
  std::vector<PremiseClause> premise;
  double intercept = 0.0;
  std::vector<double> coefficients;
  std::vector<bool> active;

  double consequent(std::span<const double> x) const;

  friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

enum class ExtrapolationPolicy { Error, NearestRule };
enum class TNorm { Product, Min };

const char* to_string(ExtrapolationPolicy policy) noexcept;
const char* to_string(TNorm tnorm) noexcept;
ExtrapolationPolicy extrapolation_policy_from_string(const std::string& text);
TNorm tnorm_from_string(const std::string& text);

// Firing strength of a rule: t-norm over the clause degrees, 1 for an empty premise.
double rule_weight(const FuzzyRule& rule, std::span<const double> x, TNorm tnorm = TNorm::Product);

// Immutable Takagi-Sugeno-Kang rule base with weighted-average inference.
class FuzzyModel {
 public:
  // Rules with an empty `active` mask get an all-true mask. Throws on
  // arity mismatches, out-of-range clause variables, non-finite
  // parameters or masked-out coefficients that are not exactly zero.
  FuzzyModel(std::vector<std::string> input_names, std::vector<FuzzyRule> rules,
             ExtrapolationPolicy policy = ExtrapolationPolicy::Error, TNorm tnorm = TNorm::Product);

  std::size_t arity() const noexcept { return input_names_.size(); }
  std::size_t rule_count() const noexcept { return rules_.size(); }
  const std::vector<std::string>& input_names() const noexcept { return input_names_; }
  const std::vector<FuzzyRule>& rules() const noexcept { return rules_; }
  ExtrapolationPolicy policy() const noexcept { return policy_; }
  TNorm tnorm() const noexcept { return tnorm_; }

  std::vector<double> weights(std::span<const double> x) const;

  // sum_i w_i * y_i(x) / sum_i w_i. With zero total weight: UncoveredInput
  // under ExtrapolationPolicy::Error, otherwise the consequent of the rule
  // whose premise midpoints are nearest to x (normalized per variable by the
  // span of that variable's breakpoints; ties go to the lowest index).
  double infer(std::span<const double> x) const;

  // Row-wise infer. A failing row aborts with its 1-based row number attached.
  Eigen::VectorXd infer_batch(const Eigen::MatrixXd& rows) const;

  std::size_t nearest_rule(std::span<const double> x) const;

  friend bool operator==(const FuzzyModel&, const FuzzyModel&) = default;

 private:
  void check_input(std::span<const double> x) const;

  std::vector<std::string> input_names_;
  std::vector<FuzzyRule> rules_;
  ExtrapolationPolicy policy_;
  TNorm tnorm_;
  std::vector<double> variable_span_;
};

double infer(const FuzzyModel& model, std::span<const double> x);
Eigen::VectorXd infer_batch(const FuzzyModel& model, const Eigen::MatrixXd& rows);

}  // namespace tskfit
