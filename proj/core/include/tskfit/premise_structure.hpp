#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tskfit/model.hpp"

namespace tskfit {

// One fuzzy subspace: a conjunction with at most one clause per variable,
// kept sorted by variable index. The empty conjunction is the whole space.
struct Subspace {
  std::vector<PremiseClause> clauses;

  const PremiseClause* clause_for(std::size_t variable) const;

  friend bool operator==(const Subspace&, const Subspace&) = default;
};

// Partition of the input space into fuzzy subspaces, one per rule.
class PremiseStructure {
 public:
  PremiseStructure() : subspaces_(1) {}
  explicit PremiseStructure(std::vector<Subspace> subspaces);

  static PremiseStructure root() { return {}; }

  const std::vector<Subspace>& subspaces() const noexcept { return subspaces_; }
  std::size_t rule_count() const noexcept { return subspaces_.size(); }
  bool is_root() const noexcept { return subspaces_.size() == 1 && subspaces_[0].clauses.empty(); }

  // Distinct variables used anywhere in the premise, ascending.
  std::vector<std::size_t> premise_variables() const;

  // Canonical text, e.g. "x1:S[0.2,0.4]&x2:B[0.1,0.9] | x1:B[0.2,0.4]";
  // "*" for the root. Used for tie-breaking and trace digests.
  std::string encode(const std::vector<std::string>& names) const;

  // Firing strengths, rows x subspaces (product conjunction).
  Eigen::MatrixXd firing_strengths(const Eigen::MatrixXd& x) const;

  // Per subspace, the rows where it has the largest positive firing strength
  // (ties go to the lower subspace index).
  std::vector<std::vector<std::size_t>> dominant_rows(const Eigen::MatrixXd& x) const;

  // Subspaces that agree with `subspace` on every clause except the one on
  // `variable`, ordered along that variable; empty when `subspace` has no
  // clause on it.
  std::vector<std::size_t> sibling_group(std::size_t subspace, std::size_t variable) const;

  friend bool operator==(const PremiseStructure&, const PremiseStructure&) = default;

 private:
  std::vector<Subspace> subspaces_;
};

// Linear-interpolated empirical quantile of `values` (need not be sorted).
double empirical_quantile(std::vector<double> values, double q);

// k fuzzy sets S, M..., B covering the variable. Crossovers sit at the
// j/k quantiles; each crossover band spans the quantiles j/k -+ h with
// h = overlap / (2 (k - 1)) (capped at 0.45 / k for k >= 3), so adjacent
// sets sum to one across the band. A band that collapses to a point is
// widened to +-1e-9 * range. Throws DegenerateRange when the values have no
// spread or the bands cannot be ordered strictly.
std::vector<MembershipFunction> quantile_partition(const std::vector<double>& values, std::size_t k, double overlap);

// Splits `subspace` along `variable` into `k` parts. If the subspace has no
// clause on the variable, it is replaced by k children (parent clauses plus
// one partition set each). If it has one, its whole sibling group (g members)
// is re-partitioned into k > g sets. Breakpoints come from the values of
// the variable on the dominant rows of the affected subspaces.
PremiseStructure split_variable(const PremiseStructure& parent, std::size_t subspace, std::size_t variable,
                                std::size_t k, const Eigen::MatrixXd& x, double overlap);

enum class CandidateKind { Root, Refine, Cross, Extend };
const char* to_string(CandidateKind kind) noexcept;

struct Candidate {
  PremiseStructure structure;
  CandidateKind kind = CandidateKind::Root;
  std::size_t subspace = 0;
  std::size_t variable = 0;
  std::size_t parts = 1;
};

// Every one-rule-larger structure reachable from `parent`:
//  Refine  re-partition a sibling group of g >= 2 subspaces into g + 1 sets,
//  Cross   split one subspace in two along a variable already in the premise,
//  Extend  split one subspace in two along a variable new to the premise.
// `extension_variables`, when set, limits which new variables may be
// introduced. Candidates whose construction hits DegenerateRange are dropped.
std::vector<Candidate> candidate_family(const PremiseStructure& parent, const Eigen::MatrixXd& x, double overlap,
                                        const std::optional<std::vector<std::size_t>>& extension_variables = {});

}  // namespace tskfit
