#include "tskfit/identify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <tuple>

#include "tskfit/error.hpp"
#include "tskfit/stats.hpp"

namespace tskfit {

const char* to_string(SeedMode mode) noexcept { return mode == SeedMode::Exhaustive ? "exhaustive" : "correlation"; }

SeedMode seed_mode_from_string(const std::string& text) {
  if (text == "exhaustive") return SeedMode::Exhaustive;
  if (text == "correlation") return SeedMode::Correlation;
  throw Error(ErrorKind::InvalidArgument, "unknown seed mode '" + text + "'");
}

const char* to_string(SeedExtensions mode) noexcept { return mode == SeedExtensions::Ranked ? "ranked" : "free"; }

SeedExtensions seed_extensions_from_string(const std::string& text) {
  if (text == "ranked") return SeedExtensions::Ranked;
  if (text == "free") return SeedExtensions::Free;
  throw Error(ErrorKind::InvalidArgument, "unknown seed-extension mode '" + text + "'");
}

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::ZeroError: return "zero_error";
    case StopReason::MaxRules: return "max_rules";
    case StopReason::NoCandidates: return "no_candidates";
  }
  return "?";
}

void SearchConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be > 0");
  if (max_rules < 1) throw Error(ErrorKind::InvalidArgument, "max_rules must be >= 1");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw Error(ErrorKind::InvalidArgument, "overlap must lie in [0, 1)");
  if (!(elimination_threshold >= 0.0)) throw Error(ErrorKind::InvalidArgument, "elimination threshold must be >= 0");
  if (lag.nb < 1) throw Error(ErrorKind::InvalidArgument, "nb must be >= 1");
}

std::size_t SearchTrace::total_evaluations() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.candidates.size();
  return n;
}

std::string digest_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FittedStructure fit_structure(const PremiseStructure& structure, const Dataset& ds, const SearchConfig& config) {
  const Eigen::MatrixXd& x = ds.inputs();
  const Eigen::VectorXd& y = ds.output();
  const auto p = x.rows();
  const auto m = x.cols();
  const auto rules = static_cast<Eigen::Index>(structure.rule_count());

  Eigen::MatrixXd w = structure.firing_strengths(x);
  for (Eigen::Index k = 0; k < p; ++k) {
    const double total = w.row(k).sum();
    if (!(total > 0.0)) {
      throw Error(ErrorKind::UncoveredInput, "training row is covered by no fuzzy subspace",
                  static_cast<std::size_t>(k) + 1);
    }
    w.row(k) /= total;
  }

  FittedStructure result{FuzzyModel({"_"}, {FuzzyRule{{}, 0.0, {0.0}, {}}}), 0.0, {}};
  std::vector<std::vector<bool>> masks;
  for (Eigen::Index r = 0; r < rules; ++r) {
    result.eliminations.push_back(
        backward_eliminate(x, y, config.elimination_threshold, ds.input_names(), w.col(r)));
    masks.push_back(result.eliminations.back().model.active);
  }

  std::vector<FuzzyRule> fuzzy_rules(static_cast<std::size_t>(rules));
  if (rules == 1) {
    const auto& lm = result.eliminations.front().model;
    fuzzy_rules[0].intercept = lm.intercept;
    fuzzy_rules[0].coefficients.assign(lm.coefficients.data(), lm.coefficients.data() + m);
    fuzzy_rules[0].active = lm.active;
  } else {
    Eigen::Index cols = 0;
    for (const auto& mask : masks) cols += 1 + static_cast<Eigen::Index>(std::count(mask.begin(), mask.end(), true));
    Eigen::MatrixXd z(p, cols);
    Eigen::Index c = 0;
    for (Eigen::Index r = 0; r < rules; ++r) {
      z.col(c++) = w.col(r);
      for (Eigen::Index j = 0; j < m; ++j) {
        if (masks[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]) z.col(c++) = w.col(r).cwiseProduct(x.col(j));
      }
    }
    const Eigen::VectorXd beta = least_squares(z, y, Eigen::VectorXd::Ones(p));
    c = 0;
    for (Eigen::Index r = 0; r < rules; ++r) {
      auto& rule = fuzzy_rules[static_cast<std::size_t>(r)];
      rule.intercept = beta(c++);
      rule.coefficients.assign(static_cast<std::size_t>(m), 0.0);
      rule.active = masks[static_cast<std::size_t>(r)];
      for (Eigen::Index j = 0; j < m; ++j) {
        if (rule.active[static_cast<std::size_t>(j)]) rule.coefficients[static_cast<std::size_t>(j)] = beta(c++);
      }
    }
  }
  for (std::size_t r = 0; r < fuzzy_rules.size(); ++r) fuzzy_rules[r].premise = structure.subspaces()[r].clauses;

  result.model = FuzzyModel(ds.input_names(), std::move(fuzzy_rules));
  result.j = performance_J(y, result.model.infer_batch(x));
  return result;
}

namespace {

struct Evaluated {
  Candidate candidate;
  FittedStructure fit;
  CandidateRecord record;
};

bool recoverable(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::DegenerateRange:
    case ErrorKind::DegenerateDesign:
    case ErrorKind::UncoveredInput:
    case ErrorKind::InvalidArgument:
      return true;
    default:
      return false;
  }
}

std::string format_j(double j) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", j);
  return buf;
}

// Single pass of breakpoint coordinate descent over an 11-point grid.
std::pair<PremiseStructure, FittedStructure> tune_breakpoints(PremiseStructure structure, FittedStructure fit,
                                                              const Dataset& ds, const SearchConfig& config) {
  const auto& x = ds.inputs();
  for (std::size_t s = 0; s < structure.rule_count(); ++s) {
    for (std::size_t c = 0; c < structure.subspaces()[s].clauses.size(); ++c) {
      const std::size_t np = structure.subspaces()[s].clauses[c].mf.params().size();
      for (std::size_t t = 0; t < np; ++t) {
        const auto dominant = structure.dominant_rows(x);
        const auto& clause = structure.subspaces()[s].clauses[c];
        const auto var = static_cast<Eigen::Index>(clause.variable);
        double vmin = x.col(var).minCoeff();
        double vmax = x.col(var).maxCoeff();
        if (!dominant[s].empty()) {
          vmin = vmax = x(static_cast<Eigen::Index>(dominant[s].front()), var);
          for (auto row : dominant[s]) {
            vmin = std::min(vmin, x(static_cast<Eigen::Index>(row), var));
            vmax = std::max(vmax, x(static_cast<Eigen::Index>(row), var));
          }
        }
        const std::vector<double> params(clause.mf.params().begin(), clause.mf.params().end());
        const double lo = t > 0 ? params[t - 1] : std::min(vmin, params[0]);
        const double hi = t + 1 < np ? params[t + 1] : std::max(vmax, params[t]);
        if (!(hi > lo)) continue;
        for (int g = 1; g <= 11; ++g) {
          auto trial_params = params;
          trial_params[t] = lo + (hi - lo) * g / 12.0;
          if (trial_params[t] == params[t]) continue;
          try {
            auto subs = structure.subspaces();
            subs[s].clauses[c].mf = MembershipFunction(clause.mf.kind(), trial_params);
            PremiseStructure trial(std::move(subs));
            auto trial_fit = fit_structure(trial, ds, config);
            if (trial_fit.j < fit.j) {
              structure = std::move(trial);
              fit = std::move(trial_fit);
              break;
            }
          } catch (const Error& e) {
            if (!recoverable(e)) throw;
          }
        }
      }
    }
  }
  return {std::move(structure), std::move(fit)};
}

SearchResult run_search(const Dataset& ds, const SearchConfig& config, const ProgressSink& progress, bool seeded) {
  config.validate();
  const auto& names = ds.input_names();
  auto emit = [&](const std::string& line) {
    if (progress) progress(line);
  };

  SearchTrace trace;
  trace.seed_mode = seeded ? SeedMode::Correlation : SeedMode::Exhaustive;
  trace.zero_tolerance = 1e-12 * rms(ds.output());
  std::vector<double> abs_corr(ds.arity(), 0.0);
  if (seeded) {
    const auto table = corr_matrix(ds);
    trace.correlation_ranking = table.ranking();
    trace.output_correlation = table.output_corr;
    for (std::size_t j = 0; j < abs_corr.size(); ++j) abs_corr[j] = std::abs(table.output_corr[j]);
    trace.seed_fallback = std::all_of(abs_corr.begin(), abs_corr.end(), [](double r) { return r == 0.0; });
    if (trace.seed_fallback) emit("warning: every input has zero correlation with the output; seeding disabled");
  }
  const bool use_ranking = seeded && !trace.seed_fallback;

  const PremiseStructure root;
  FittedStructure baseline = fit_structure(root, ds, config);
  {
    SearchStep step;
    step.rules = 1;
    step.candidates.push_back({root.encode(names), CandidateKind::Root, 0, 0, 1, 0, baseline.j});
    step.j = baseline.j;
    trace.steps.push_back(std::move(step));
    emit("step 1 root " + digest_hex("*") + " J=" + format_j(baseline.j));
  }

  PremiseStructure current = root;
  PremiseStructure best_structure = root;
  FittedStructure best_fit = baseline;
  double previous_j = baseline.j;

  if (config.max_rules <= 1) {
    trace.stop = StopReason::MaxRules;
  }
  while (config.max_rules > 1) {
    std::optional<std::vector<std::size_t>> allowed;
    if (use_ranking) {
      if (current.is_root()) {
        allowed = std::vector<std::size_t>{trace.correlation_ranking.front()};
      } else if (config.seed_extensions == SeedExtensions::Ranked) {
        allowed = std::vector<std::size_t>{};
        const auto used = current.premise_variables();
        for (auto v : trace.correlation_ranking) {
          if (std::find(used.begin(), used.end(), v) == used.end()) {
            allowed->push_back(v);
            break;
          }
        }
      }
    }

    auto candidates = candidate_family(current, ds.inputs(), config.overlap, allowed);
    if (use_ranking) {
      std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
        return abs_corr[a.variable] > abs_corr[b.variable];
      });
    }
    const std::size_t step_index = trace.steps.size() + 1;
    std::vector<Evaluated> evaluated;
    for (auto& cand : candidates) {
      try {
        auto fit = fit_structure(cand.structure, ds, config);
        CandidateRecord rec{cand.structure.encode(names), cand.kind, cand.subspace, cand.variable, cand.parts,
                            cand.structure.premise_variables().size(), fit.j};
        emit("step " + std::to_string(step_index) + " " + to_string(cand.kind) + " " + digest_hex(rec.encoding) +
             " J=" + format_j(fit.j));
        evaluated.push_back({std::move(cand), std::move(fit), std::move(rec)});
      } catch (const Error& e) {
        if (!recoverable(e)) throw;
        emit("step " + std::to_string(step_index) + " skipped " + digest_hex(cand.structure.encode(names)) + ": " +
             e.what());
      }
    }
    if (evaluated.empty()) {
      trace.stop = StopReason::NoCandidates;
      break;
    }

    std::size_t chosen = 0;
    for (std::size_t c = 1; c < evaluated.size(); ++c) {
      const double ja = evaluated[c].record.j;
      const double jb = evaluated[chosen].record.j;
      const double ra = use_ranking ? -abs_corr[evaluated[c].candidate.variable] : 0.0;
      const double rb = use_ranking ? -abs_corr[evaluated[chosen].candidate.variable] : 0.0;
      if (std::tie(ja, evaluated[c].record.premise_variable_count, ra, evaluated[c].candidate.variable,
                   evaluated[c].record.encoding) <
          std::tie(jb, evaluated[chosen].record.premise_variable_count, rb, evaluated[chosen].candidate.variable,
                   evaluated[chosen].record.encoding)) {
        chosen = c;
      }
    }

    SearchStep step;
    step.rules = evaluated[chosen].candidate.structure.rule_count();
    for (const auto& e : evaluated) step.candidates.push_back(e.record);
    step.selected = chosen;
    PremiseStructure selected = evaluated[chosen].candidate.structure;
    FittedStructure selected_fit = std::move(evaluated[chosen].fit);

    if (config.refine_premise) {
      auto [tuned, tuned_fit] = tune_breakpoints(selected, selected_fit, ds, config);
      if (tuned_fit.j < selected_fit.j) {
        CandidateRecord rec = evaluated[chosen].record;
        rec.encoding = tuned.encode(names);
        rec.j = tuned_fit.j;
        emit("step " + std::to_string(step_index) + " tuned " + digest_hex(rec.encoding) + " J=" + format_j(rec.j));
        step.candidates.push_back(std::move(rec));
        step.selected = step.candidates.size() - 1;
        selected = std::move(tuned);
        selected_fit = std::move(tuned_fit);
      }
    }

    const double j = selected_fit.j;
    step.j = j;
    if (j > 0.0) step.stop_value = std::abs(j - previous_j) / j;
    trace.steps.push_back(std::move(step));

    if (j < best_fit.j) {
      best_fit = selected_fit;
      best_structure = selected;
      trace.best_step = trace.steps.size() - 1;
    }
    previous_j = j;
    current = std::move(selected);

    if (j <= trace.zero_tolerance) {
      trace.stop = StopReason::ZeroError;
      break;
    }
    if (*trace.steps.back().stop_value < config.epsilon) {
      trace.stop = StopReason::Converged;
      break;
    }
    if (current.rule_count() >= config.max_rules) {
      trace.stop = StopReason::MaxRules;
      break;
    }
  }

  emit(std::string("stop ") + to_string(trace.stop) + " after " + std::to_string(trace.steps.size()) +
       " steps; best J=" + format_j(best_fit.j) + " with " + std::to_string(best_structure.rule_count()) + " rules");
  return SearchResult{std::move(best_structure), std::move(best_fit), std::move(baseline), std::move(trace)};
}

}  // namespace

SearchResult search(const Dataset& ds, const SearchConfig& config, const ProgressSink& progress) {
  return run_search(ds, config, progress, false);
}

SearchResult search_corr_seeded(const Dataset& ds, const SearchConfig& config, const ProgressSink& progress) {
  return run_search(ds, config, progress, true);
}

SearchResult identify(const Dataset& ds, const SearchConfig& config, const ProgressSink& progress) {
  return config.premise_seed == SeedMode::Correlation ? search_corr_seeded(ds, config, progress)
                                                      : search(ds, config, progress);
}

}  // namespace tskfit
