#include "tskfit/premise_structure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "tskfit/error.hpp"

namespace tskfit {

namespace {

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Subspace with_clause(Subspace base, PremiseClause clause) {
  auto pos = std::find_if(base.clauses.begin(), base.clauses.end(),
                          [&](const PremiseClause& c) { return c.variable >= clause.variable; });
  base.clauses.insert(pos, std::move(clause));
  return base;
}

Subspace without_variable(Subspace base, std::size_t variable) {
  std::erase_if(base.clauses, [&](const PremiseClause& c) { return c.variable == variable; });
  return base;
}

}  // namespace

const PremiseClause* Subspace::clause_for(std::size_t variable) const {
  for (const auto& c : clauses) {
    if (c.variable == variable) return &c;
  }
  return nullptr;
}

PremiseStructure::PremiseStructure(std::vector<Subspace> subspaces) : subspaces_(std::move(subspaces)) {
  if (subspaces_.empty()) throw Error(ErrorKind::InvalidArgument, "a premise structure needs at least one subspace");
  for (auto& s : subspaces_) {
    std::sort(s.clauses.begin(), s.clauses.end(),
              [](const PremiseClause& a, const PremiseClause& b) { return a.variable < b.variable; });
    for (std::size_t i = 1; i < s.clauses.size(); ++i) {
      if (s.clauses[i].variable == s.clauses[i - 1].variable) {
        throw Error(ErrorKind::InvalidArgument, "a subspace may hold only one clause per variable");
      }
    }
    if (s.clauses.empty() && subspaces_.size() > 1) {
      throw Error(ErrorKind::InvalidArgument, "only the single-subspace root may have an empty premise");
    }
  }
}

std::vector<std::size_t> PremiseStructure::premise_variables() const {
  std::set<std::size_t> vars;
  for (const auto& s : subspaces_) {
    for (const auto& c : s.clauses) vars.insert(c.variable);
  }
  return {vars.begin(), vars.end()};
}

std::string PremiseStructure::encode(const std::vector<std::string>& names) const {
  if (is_root()) return "*";
  std::string out;
  for (std::size_t i = 0; i < subspaces_.size(); ++i) {
    if (i > 0) out += " | ";
    const auto& clauses = subspaces_[i].clauses;
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      if (c > 0) out += "&";
      const auto v = clauses[c].variable;
      out += v < names.size() ? names[v] : "x" + std::to_string(v + 1);
      out += ":";
      out += to_string(clauses[c].mf.kind());
      out += "[";
      const auto params = clauses[c].mf.params();
      for (std::size_t p = 0; p < params.size(); ++p) {
        if (p > 0) out += ",";
        out += format_real(params[p]);
      }
      out += "]";
    }
  }
  return out;
}

Eigen::MatrixXd PremiseStructure::firing_strengths(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(x.rows(), static_cast<Eigen::Index>(subspaces_.size()));
  for (std::size_t s = 0; s < subspaces_.size(); ++s) {
    for (const auto& c : subspaces_[s].clauses) {
      if (static_cast<Eigen::Index>(c.variable) >= x.cols()) {
        throw Error(ErrorKind::ArityMismatch, "premise variable outside the data columns");
      }
      for (Eigen::Index k = 0; k < x.rows(); ++k) {
        w(k, static_cast<Eigen::Index>(s)) *= c.mf(x(k, static_cast<Eigen::Index>(c.variable)));
      }
    }
  }
  return w;
}

std::vector<std::vector<std::size_t>> PremiseStructure::dominant_rows(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd w = firing_strengths(x);
  std::vector<std::vector<std::size_t>> rows(subspaces_.size());
  for (Eigen::Index k = 0; k < w.rows(); ++k) {
    Eigen::Index best = 0;
    const double top = w.row(k).maxCoeff(&best);
    if (top > 0.0) rows[static_cast<std::size_t>(best)].push_back(static_cast<std::size_t>(k));
  }
  return rows;
}

std::vector<std::size_t> PremiseStructure::sibling_group(std::size_t subspace, std::size_t variable) const {
  const auto& self = subspaces_.at(subspace);
  if (self.clause_for(variable) == nullptr) return {};
  const Subspace common = without_variable(self, variable);
  std::vector<std::size_t> group;
  for (std::size_t s = 0; s < subspaces_.size(); ++s) {
    if (subspaces_[s].clause_for(variable) != nullptr && without_variable(subspaces_[s], variable) == common) {
      group.push_back(s);
    }
  }
  std::stable_sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
    return subspaces_[a].clause_for(variable)->mf.midpoint() < subspaces_[b].clause_for(variable)->mf.midpoint();
  });
  return group;
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

std::vector<MembershipFunction> quantile_partition(const std::vector<double>& values, std::size_t k, double overlap) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "a partition needs at least two sets");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw Error(ErrorKind::InvalidArgument, "overlap must lie in [0, 1)");
  if (values.size() < 2) throw Error(ErrorKind::DegenerateRange, "fewer than two samples in the subspace");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double range = *hi_it - *lo_it;
  if (!(range > 0.0)) throw Error(ErrorKind::DegenerateRange, "variable has no spread in the subspace");

  double half = overlap / (2.0 * static_cast<double>(k - 1));
  if (k >= 3) half = std::min(half, 0.45 / static_cast<double>(k));
  const double delta = 1e-9 * range;

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> bands;
  for (std::size_t j = 1; j < k; ++j) {
    const double centre = static_cast<double>(j) / static_cast<double>(k);
    double a = empirical_quantile(sorted, centre - half);
    double b = empirical_quantile(sorted, centre + half);
    if (!(b > a)) {
      const double mid = 0.5 * (a + b);
      a = mid - delta;
      b = mid + delta;
    }
    if (!bands.empty() && !(a > bands.back().second)) {
      throw Error(ErrorKind::DegenerateRange, "partition bands collapse onto each other");
    }
    bands.emplace_back(a, b);
  }

  std::vector<MembershipFunction> sets;
  sets.push_back(MembershipFunction::small(bands.front().first, bands.front().second));
  for (std::size_t j = 1; j + 1 < k; ++j) {
    sets.push_back(MembershipFunction::medium(bands[j - 1].first, bands[j - 1].second, bands[j].first, bands[j].second));
  }
  sets.push_back(MembershipFunction::big(bands.back().first, bands.back().second));
  return sets;
}

PremiseStructure split_variable(const PremiseStructure& parent, std::size_t subspace, std::size_t variable,
                                std::size_t k, const Eigen::MatrixXd& x, double overlap) {
  const auto& subs = parent.subspaces();
  if (subspace >= subs.size()) throw Error(ErrorKind::InvalidArgument, "subspace index out of range");
  if (static_cast<Eigen::Index>(variable) >= x.cols()) {
    throw Error(ErrorKind::ArityMismatch, "split variable outside the data columns");
  }
  std::vector<std::size_t> group = parent.sibling_group(subspace, variable);
  if (group.empty()) {
    group = {subspace};
  } else if (group.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "subspace already constrains this variable and has no siblings");
  }
  if (k <= group.size()) {
    throw Error(ErrorKind::InvalidArgument, "split must produce more sets than it replaces");
  }

  const auto dominant = parent.dominant_rows(x);
  std::vector<double> values;
  for (auto s : group) {
    for (auto row : dominant[s]) values.push_back(x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(variable)));
  }
  const auto parts = quantile_partition(values, k, overlap);

  const Subspace common = without_variable(subs[subspace], variable);
  std::vector<Subspace> children;
  for (const auto& mf : parts) children.push_back(with_clause(common, {variable, mf}));

  const std::size_t insert_at = *std::min_element(group.begin(), group.end());
  std::vector<Subspace> next;
  for (std::size_t s = 0; s < subs.size(); ++s) {
    if (s == insert_at) next.insert(next.end(), children.begin(), children.end());
    if (std::find(group.begin(), group.end(), s) == group.end()) next.push_back(subs[s]);
  }
  return PremiseStructure(std::move(next));
}

const char* to_string(CandidateKind kind) noexcept {
  switch (kind) {
    case CandidateKind::Root: return "root";
    case CandidateKind::Refine: return "refine";
    case CandidateKind::Cross: return "cross";
    case CandidateKind::Extend: return "extend";
  }
  return "?";
}

std::vector<Candidate> candidate_family(const PremiseStructure& parent, const Eigen::MatrixXd& x, double overlap,
                                        const std::optional<std::vector<std::size_t>>& extension_variables) {
  const auto premise_vars = parent.premise_variables();
  auto in_premise = [&](std::size_t v) {
    return std::find(premise_vars.begin(), premise_vars.end(), v) != premise_vars.end();
  };
  auto extension_allowed = [&](std::size_t v) {
    return !extension_variables ||
           std::find(extension_variables->begin(), extension_variables->end(), v) != extension_variables->end();
  };

  std::vector<Candidate> out;
  const auto m = static_cast<std::size_t>(x.cols());
  for (std::size_t s = 0; s < parent.rule_count(); ++s) {
    for (std::size_t v = 0; v < m; ++v) {
      Candidate cand;
      cand.subspace = s;
      cand.variable = v;
      if (parent.subspaces()[s].clause_for(v) != nullptr) {
        const auto group = parent.sibling_group(s, v);
        if (group.size() < 2 || *std::min_element(group.begin(), group.end()) != s) continue;
        cand.kind = CandidateKind::Refine;
        cand.parts = group.size() + 1;
      } else {
        cand.kind = in_premise(v) ? CandidateKind::Cross : CandidateKind::Extend;
        if (cand.kind == CandidateKind::Extend && !extension_allowed(v)) continue;
        cand.parts = 2;
      }
      try {
        cand.structure = split_variable(parent, s, v, cand.parts, x, overlap);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::DegenerateRange) continue;
        throw;
      }
      out.push_back(std::move(cand));
    }
  }
  return out;
}

}  // namespace tskfit
