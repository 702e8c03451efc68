#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tskfit/dataset.hpp"
#include "tskfit/model.hpp"
#include "tskfit/premise_structure.hpp"
#include "tskfit/regress.hpp"

namespace tskfit {

enum class SeedMode { Exhaustive, Correlation };
const char* to_string(SeedMode mode) noexcept;
SeedMode seed_mode_from_string(const std::string& text);

// How correlation seeding treats variables introduced after step 2.
//   Ranked  each step may only introduce the highest-|corr| unused variable.
//   Free    only the first split is restricted to the seed variable.
enum class SeedExtensions { Ranked, Free };
const char* to_string(SeedExtensions mode) noexcept;
SeedExtensions seed_extensions_from_string(const std::string& text);

struct SearchConfig {
  double epsilon = 0.01;
  std::size_t max_rules = 8;
  SeedMode premise_seed = SeedMode::Exhaustive;
  SeedExtensions seed_extensions = SeedExtensions::Ranked;
  double overlap = 0.25;
  double elimination_threshold = kDefaultEliminationThreshold;
  LagSpec lag;
  // Coordinate descent on each selected structure's breakpoints (11-point
  // grid per breakpoint, J-improving moves only).
  bool refine_premise = false;

  void validate() const;
};

struct FittedStructure {
  FuzzyModel model;
  double j = 0.0;
  // Per-rule consequent elimination, in rule order.
  std::vector<EliminationResult> eliminations;
};

// Fits the consequents of `structure` on `ds`:
//  1. per rule, backward elimination on the weighted problem whose sample
//     weights are the rule's normalized firing strengths,
//  2. one joint least-squares fit of all surviving consequent coefficients
//     against the normalized-weight blend, i.e. minimizing J directly.
// Throws UncoveredInput when a training row fires no rule.
FittedStructure fit_structure(const PremiseStructure& structure, const Dataset& ds, const SearchConfig& config);

enum class StopReason { Converged, ZeroError, MaxRules, NoCandidates };
const char* to_string(StopReason reason) noexcept;

struct CandidateRecord {
  std::string encoding;
  CandidateKind kind = CandidateKind::Root;
  std::size_t subspace = 0;
  std::size_t variable = 0;
  std::size_t parts = 1;
  std::size_t premise_variable_count = 0;
  double j = 0.0;
};

struct SearchStep {
  std::size_t rules = 1;  // i in STR(i)
  std::vector<CandidateRecord> candidates;
  std::size_t selected = 0;
  double j = 0.0;
  // |J(i) - J(i-1)| / J(i); absent for the first step and when J(i) is zero.
  std::optional<double> stop_value;
};

struct SearchTrace {
  SeedMode seed_mode = SeedMode::Exhaustive;
  std::vector<std::size_t> correlation_ranking;  // empty for exhaustive search
  std::vector<double> output_correlation;
  bool seed_fallback = false;  // all correlations degenerate
  std::vector<SearchStep> steps;
  StopReason stop = StopReason::MaxRules;
  std::size_t best_step = 0;
  double zero_tolerance = 0.0;

  std::size_t total_evaluations() const;
  const SearchStep& selected_step() const { return steps.at(best_step); }
};

struct SearchResult {
  PremiseStructure structure;
  FittedStructure fit;
  FittedStructure baseline;  // single-rule regression (root structure)
  SearchTrace trace;
};

using ProgressSink = std::function<void(const std::string&)>;

// Premise-structure search by incremental splitting. Step 1 fits the root
// structure; step i evaluates every candidate_family() member of STR(i-1)
// and keeps the smallest J (ties: fewer premise variables, then lower split
// variable index, then the structure encoding). Stops when J(i) is zero
// (<= 1e-12 * RMS(y)), when |J(i) - J(i-1)| / J(i) < epsilon, or at
// max_rules. Returns the best-J structure of all steps.
SearchResult search(const Dataset& ds, const SearchConfig& config, const ProgressSink& progress = {});

// search() seeded by correlation: the first split only considers the input
// with the largest |pearson_corr| against the output; later extensions
// follow SearchConfig::seed_extensions, with equal-J ties going to the
// higher |corr| variable.
SearchResult search_corr_seeded(const Dataset& ds, const SearchConfig& config, const ProgressSink& progress = {});

// Dispatches on config.premise_seed.
SearchResult identify(const Dataset& ds, const SearchConfig& config, const ProgressSink& progress = {});

// Stable 64-bit FNV-1a digest, hex encoded.
std::string digest_hex(const std::string& text);

}  // namespace tskfit
