#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_data.hpp"
#include "tskfit/error.hpp"
#include "tskfit/fixture.hpp"
#include "tskfit/identify.hpp"
#include "tskfit/pipeline.hpp"
#include "tskfit/premise_structure.hpp"

using namespace tskfit;
using testdata::to_eigen;
using MF = MembershipFunction;

namespace {

// Replays the search's stopping rule over a finished trace.
void expect_stop_rule_holds(const SearchTrace& t, const SearchConfig& c) {
  ASSERT_FALSE(t.steps.empty());
  for (std::size_t i = 1; i < t.steps.size(); ++i) {
    const bool last = i + 1 == t.steps.size();
    const auto& s = t.steps[i];
    const double prev = t.steps[i - 1].j;
    const bool zero = s.j <= t.zero_tolerance;
    const bool conv = s.j > 0.0 && std::abs(s.j - prev) / s.j < c.epsilon;
    const bool cap = s.rules >= c.max_rules;
    if (!last) {
      EXPECT_FALSE(zero || conv || cap) << "search should have stopped at step " << i + 1;
    } else if (t.stop == StopReason::ZeroError) {
      EXPECT_TRUE(zero);
    } else if (t.stop == StopReason::Converged) {
      EXPECT_TRUE(conv && !zero);
    } else if (t.stop == StopReason::MaxRules) {
      EXPECT_TRUE(cap && !conv && !zero);
    }
  }
}

}  // namespace

// --- quantile_partition ----------------------------------------------------

TEST(Quantile, MatchesTypeSevenOracle) {
  std::mt19937_64 rng(1);
  const auto v = oracle::uniform_vec(rng, 37);
  for (double q : {0.0, 0.1, 0.375, 0.5, 0.9, 1.0}) EXPECT_EQ(empirical_quantile(v, q), oracle::quantile7(v, q));
}

TEST(QuantilePartition, CrispSplitGetsMachineScaledBand) {
  std::vector<double> v;
  for (int i = 0; i <= 100; ++i) v.push_back(i / 100.0);
  const auto sets = quantile_partition(v, 2, 0.0);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].kind(), MembershipKind::S);
  EXPECT_EQ(sets[1].kind(), MembershipKind::B);
  EXPECT_NEAR(sets[0].params()[0], 0.5 - 1e-9, 1e-15);
  EXPECT_NEAR(sets[0].params()[1], 0.5 + 1e-9, 1e-15);
  EXPECT_LT(sets[0].params()[0], sets[0].params()[1]);
}

TEST(QuantilePartition, ElevenPointsStraddleTheMedian) {
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(i);
  const auto sets = quantile_partition(v, 2, 0.25);
  EXPECT_EQ(sets[0].params()[0], oracle::quantile7(v, 0.375));
  EXPECT_EQ(sets[0].params()[1], oracle::quantile7(v, 0.625));
  EXPECT_EQ(sets[0].params()[0], 3.75);
  EXPECT_EQ(sets[0].params()[1], 6.25);
  EXPECT_EQ(sets[0].params()[0], sets[1].params()[0]);
  EXPECT_EQ(sets[0].params()[1], sets[1].params()[1]);
}

TEST(QuantilePartition, AdjacentSetsSumToOne) {
  std::mt19937_64 rng(2);
  const auto v = oracle::uniform_vec(rng, 200, 0, 1);
  for (std::size_t k : {2u, 3u, 4u}) {
    const auto sets = quantile_partition(v, k, 0.25);
    ASSERT_EQ(sets.size(), k);
    for (double x = -0.05; x <= 1.05; x += 0.001) {
      double total = 0.0;
      for (const auto& s : sets) total += s(x);
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(QuantilePartition, NoSpreadIsDegenerate) {
  try {
    quantile_partition({2.0, 2.0, 2.0}, 2, 0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateRange);
  }
}

// --- premise structures ----------------------------------------------------

TEST(PremiseStructure, ThreeWaySplitReplacesOneSubspaceWithThree) {
  std::mt19937_64 rng(3);
  const auto x = to_eigen(oracle::uniform_rows(rng, 60, 2, 0, 1));
  const auto s = split_variable(PremiseStructure::root(), 0, 1, 3, x, 0.25);
  EXPECT_EQ(s.rule_count(), 3u);
  EXPECT_EQ(s.premise_variables(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(s.subspaces()[1].clauses[0].mf.kind(), MembershipKind::M);
}

TEST(PremiseStructure, RootEncodesAsStar) { EXPECT_EQ(PremiseStructure::root().encode({"a"}), "*"); }

TEST(PremiseStructure, SplitOfConstrainedLoneSubspaceIsRejected) {
  std::mt19937_64 rng(4);
  const auto x = to_eigen(oracle::uniform_rows(rng, 60, 2, 0, 1));
  const auto two = split_variable(PremiseStructure::root(), 0, 0, 2, x, 0.25);
  // x1:S & x2:S | x1:S & x2:B | x1:B -- the last has no sibling along x1.
  const auto three = split_variable(two, 0, 1, 2, x, 0.25);
  ASSERT_EQ(three.rule_count(), 3u);
  EXPECT_TRUE(three.sibling_group(2, 0).size() <= 1);
  EXPECT_THROW(split_variable(three, 2, 0, 2, x, 0.25), Error);
  EXPECT_EQ(split_variable(three, 0, 1, 3, x, 0.25).rule_count(), 4u);
}

TEST(PremiseStructure, CandidateFamilyOfRootIsOneSplitPerVariable) {
  std::mt19937_64 rng(5);
  const auto x = to_eigen(oracle::uniform_rows(rng, 80, 3, 0, 1));
  const auto family = candidate_family(PremiseStructure::root(), x, 0.25);
  ASSERT_EQ(family.size(), 3u);
  for (std::size_t v = 0; v < 3; ++v) {
    EXPECT_EQ(family[v].variable, v);
    EXPECT_EQ(family[v].structure.rule_count(), 2u);
  }
}

TEST(PremiseStructure, CandidateFamilyAddsExactlyOneRule) {
  std::mt19937_64 rng(6);
  const auto x = to_eigen(oracle::uniform_rows(rng, 120, 3, 0, 1));
  auto s = split_variable(PremiseStructure::root(), 0, 0, 2, x, 0.25);
  const auto family = candidate_family(s, x, 0.25);
  bool refine = false, extend = false;
  for (const auto& c : family) {
    EXPECT_EQ(c.structure.rule_count(), 3u);
    refine |= c.kind == CandidateKind::Refine;
    extend |= c.kind == CandidateKind::Extend;
  }
  EXPECT_TRUE(refine);
  EXPECT_TRUE(extend);
  const auto restricted = candidate_family(s, x, 0.25, std::vector<std::size_t>{2});
  for (const auto& c : restricted) {
    if (c.kind == CandidateKind::Extend) EXPECT_EQ(c.variable, 2u);
  }
}

// --- fit_structure ---------------------------------------------------------

TEST(FitStructure, RootEqualsPlainRegressionWithElimination) {
  std::mt19937_64 rng(7);
  const auto rows = oracle::uniform_rows(rng, 50, 3);
  oracle::Vec y;
  for (const auto& r : rows) y.push_back(1.0 + r[0] + 0.2 * r[1] * r[1]);
  const auto ds = testdata::make_dataset(rows, y);
  SearchConfig c;
  const auto fit = fit_structure(PremiseStructure::root(), ds, c);
  const auto elim = backward_eliminate(ds.inputs(), ds.output(), c.elimination_threshold);
  ASSERT_EQ(fit.model.rule_count(), 1u);
  EXPECT_EQ(fit.model.rules()[0].active, elim.model.active);
  EXPECT_NEAR(fit.j, elim.j, 1e-12);
}

TEST(FitStructure, RecoversKnownTwoRuleModel) {
  const auto known = testdata::known_two_rule();
  const auto structure = split_variable(PremiseStructure::root(), 0, 0, 2, known.data.inputs(), 0.25);
  const auto fit = fit_structure(structure, known.data, SearchConfig{});
  EXPECT_LE(fit.j, 1e-6 * rms(known.data.output()));
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& got = fit.model.rules()[r];
    const auto& want = known.truth.rules()[r];
    EXPECT_NEAR(got.intercept, want.intercept, 1e-4 * std::abs(want.intercept));
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(got.coefficients[j], want.coefficients[j], 1e-4 * std::abs(want.coefficients[j]));
  }
}

TEST(FitStructure, ConstantOutputGivesConstantRules) {
  std::mt19937_64 rng(8);
  const auto rows = oracle::uniform_rows(rng, 40, 2, 0, 1);
  const auto ds = testdata::make_dataset(rows, oracle::Vec(40, 3.5));
  const auto structure = split_variable(PremiseStructure::root(), 0, 0, 2, ds.inputs(), 0.25);
  const auto fit = fit_structure(structure, ds, SearchConfig{});
  EXPECT_LE(fit.j, 1e-12);
  for (const auto& r : fit.model.rules()) EXPECT_NEAR(r.intercept, 3.5, 1e-10);
}

TEST(FitStructure, UncoveredTrainingRowIsReported) {
  std::mt19937_64 rng(9);
  const auto rows = oracle::uniform_rows(rng, 30, 1, 0, 1);
  const auto ds = testdata::make_dataset(rows, oracle::uniform_vec(rng, 30));
  PremiseStructure s({Subspace{{{0, MF::small(0.1, 0.2)}}}, Subspace{{{0, MF::big(0.8, 0.9)}}}});
  try {
    fit_structure(s, ds, SearchConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UncoveredInput);
    EXPECT_TRUE(e.row().has_value());
  }
}

TEST(FitStructure, FurnacePremiseRecoversFurnaceConsequents) {
  // With the premise handed over, the consequent solver alone must rebuild
  // the published rule base from noiseless samples.
  const auto truth = furnace_rule_base();
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd raw(600, 6);
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    raw(i, 0) = 1.0 + u(rng);
    raw(i, 1) = 0.2 + 4.8 * u(rng);
    raw(i, 2) = u(rng);
    raw(i, 3) = 0.05 + 1.35 * u(rng);
    raw(i, 4) = u(rng);
    raw(i, 5) = u(rng);
  }
  const Dataset raw_ds({"v1", "v2", "v3", "v4", "v5", "v6"}, "y", raw, Eigen::VectorXd::Zero(600));
  const auto ds = transform_for_model(truth, raw_ds.with_output(predict(truth, raw_ds)));
  std::vector<Subspace> subs;
  for (const auto& r : truth.model.rules()) subs.push_back(Subspace{r.premise});
  SearchConfig c;
  c.elimination_threshold = 0.0;
  const auto fit = fit_structure(PremiseStructure(subs), ds, c);
  EXPECT_LE(fit.j, 1e-6 * rms(ds.output()));
}

// --- search ----------------------------------------------------------------

TEST(Search, PureLineStopsAtStepTwoWithAffineModel) {
  std::mt19937_64 rng(11);
  const auto rows = oracle::uniform_rows(rng, 50, 1, 0, 1);
  oracle::Vec y;
  for (const auto& r : rows) y.push_back(3.0 * r[0] + 1.0);
  const auto ds = testdata::make_dataset(rows, y);
  const auto res = search(ds, SearchConfig{});
  EXPECT_EQ(res.trace.steps.size(), 2u);
  EXPECT_EQ(res.trace.stop, StopReason::ZeroError);
  EXPECT_EQ(res.trace.best_step, 0u);
  EXPECT_EQ(res.fit.model.rule_count(), 1u);
  EXPECT_NEAR(res.fit.model.rules()[0].intercept, 1.0, 1e-10);
  EXPECT_NEAR(res.fit.model.rules()[0].coefficients[0], 3.0, 1e-10);
}

TEST(Search, PiecewiseDataSplitsOnX1) {
  const auto ds = testdata::piecewise_dataset();
  const auto res = search(ds, SearchConfig{});
  ASSERT_GE(res.trace.steps.size(), 2u);
  const auto& step = res.trace.steps[1];
  ASSERT_EQ(step.candidates.size(), 2u);
  EXPECT_EQ(step.candidates[step.selected].variable, 0u);
  const auto rows = testdata::to_rows(ds.inputs());
  const auto y = testdata::to_vec(ds.output());
  EXPECT_NEAR(step.candidates[0].j, oracle::two_way_split_rmse(rows, y, 0, 0.25, 0.05), 1e-8);
  EXPECT_NEAR(step.candidates[1].j, oracle::two_way_split_rmse(rows, y, 1, 0.25, 0.05), 1e-8);
}

TEST(Search, HugeEpsilonStopsAfterTwoSteps) {
  const auto ds = testdata::piecewise_dataset();
  SearchConfig c;
  c.epsilon = 1e6;
  const auto res = search(ds, c);
  EXPECT_EQ(res.trace.steps.size(), 2u);
  EXPECT_EQ(res.trace.stop, StopReason::Converged);
  expect_stop_rule_holds(res.trace, c);
}

TEST(Search, StoppingRuleHoldsAcrossEpsilons) {
  const auto ds = testdata::piecewise_dataset(150, 5);
  for (double eps : {1e-6, 1e-2, 1e6}) {
    SearchConfig c;
    c.epsilon = eps;
    c.max_rules = 5;
    const auto res = search(ds, c);
    expect_stop_rule_holds(res.trace, c);
  }
}

TEST(Search, SelectedCandidateHasMinimalJ) {
  const auto ds = testdata::piecewise_dataset(120, 3);
  SearchConfig c;
  c.max_rules = 4;
  c.epsilon = 1e-9;
  const auto res = search(ds, c);
  for (const auto& s : res.trace.steps) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cand : s.candidates) best = std::min(best, cand.j);
    EXPECT_EQ(s.candidates[s.selected].j, best);
    EXPECT_EQ(s.j, best);
  }
}

TEST(Search, NeverWorseThanBaseline) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 5; ++t) {
    const auto rows = oracle::uniform_rows(rng, 80, 2, 0, 1);
    oracle::Vec y;
    for (const auto& r : rows) y.push_back(std::sin(6 * r[0]) + r[1]);
    const auto res = search(testdata::make_dataset(rows, y), SearchConfig{});
    EXPECT_LE(res.fit.j, res.baseline.j);
  }
}

TEST(Search, MaxRulesOneReturnsBaseline) {
  SearchConfig c;
  c.max_rules = 1;
  const auto res = search(testdata::piecewise_dataset(), c);
  EXPECT_EQ(res.trace.steps.size(), 1u);
  EXPECT_EQ(res.trace.stop, StopReason::MaxRules);
  EXPECT_EQ(res.fit.model, res.baseline.model);
}

TEST(Search, InvalidConfigIsRejected) {
  SearchConfig c;
  c.epsilon = 0.0;
  EXPECT_THROW(search(testdata::piecewise_dataset(), c), Error);
}

TEST(Search, RefinePremiseNeverIncreasesJ) {
  const auto ds = testdata::piecewise_dataset(100, 8);
  SearchConfig plain;
  plain.max_rules = 3;
  plain.epsilon = 1e-9;
  SearchConfig tuned = plain;
  tuned.refine_premise = true;
  const auto a = search(ds, plain);
  const auto b = search(ds, tuned);
  EXPECT_LE(b.trace.steps[1].j, a.trace.steps[1].j);
}

// --- search_corr_seeded ----------------------------------------------------

TEST(CorrSeeded, ExactCopyOfOutputIsTheSeed) {
  std::mt19937_64 rng(13);
  auto rows = oracle::uniform_rows(rng, 60, 3, 0, 1);
  oracle::Vec y;
  for (const auto& r : rows) y.push_back(r[1]);
  const auto res = search_corr_seeded(testdata::make_dataset(rows, y), SearchConfig{});
  EXPECT_EQ(res.trace.correlation_ranking.front(), 1u);
}

TEST(CorrSeeded, FirstSplitOnlyUsesSeedVariable) {
  const auto ds = testdata::piecewise_dataset();
  const auto res = search_corr_seeded(ds, SearchConfig{});
  ASSERT_GE(res.trace.steps.size(), 2u);
  for (const auto& c : res.trace.steps[1].candidates) EXPECT_EQ(c.variable, res.trace.correlation_ranking.front());
  EXPECT_LE(res.trace.total_evaluations(), search(ds, SearchConfig{}).trace.total_evaluations());
}

TEST(CorrSeeded, RankingFollowsPrescribedCorrelationOrder) {
  // Columns built so that |corr(y, .)| descends m9, m5, m4, m1.
  std::mt19937_64 rng(14);
  std::normal_distribution<double> n(0.0, 1.0);
  const std::size_t p = 400;
  Eigen::MatrixXd x(p, 4);
  Eigen::VectorXd y(p);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(p); ++i) {
    y(i) = n(rng);
    x(i, 0) = 0.2 * y(i) + n(rng);  // m1
    x(i, 1) = 1.0 * y(i) + n(rng);  // m4
    x(i, 2) = -2.0 * y(i) + n(rng); // m5
    x(i, 3) = 4.0 * y(i) + n(rng);  // m9
  }
  const Dataset ds({"m1", "m4", "m5", "m9"}, "y", x, y);
  const auto res = search_corr_seeded(ds, SearchConfig{});
  EXPECT_EQ(res.trace.correlation_ranking, (std::vector<std::size_t>{3, 2, 1, 0}));
}

TEST(CorrSeeded, SingleInputMatchesExhaustive) {
  std::mt19937_64 rng(15);
  const auto rows = oracle::uniform_rows(rng, 80, 1, 0, 1);
  oracle::Vec y;
  for (const auto& r : rows) y.push_back(std::abs(r[0] - 0.4));
  const auto ds = testdata::make_dataset(rows, y);
  const auto a = search(ds, SearchConfig{});
  const auto b = search_corr_seeded(ds, SearchConfig{});
  EXPECT_EQ(a.fit.model, b.fit.model);
  EXPECT_EQ(a.trace.steps.size(), b.trace.steps.size());
}

TEST(CorrSeeded, AllZeroCorrelationsFallBackToExhaustive) {
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;
  const Dataset ds({"a"}, "y", x, to_eigen({1, -1, -1, 1}));
  std::vector<std::string> lines;
  const auto res = search_corr_seeded(ds, SearchConfig{}, [&](const std::string& l) { lines.push_back(l); });
  EXPECT_TRUE(res.trace.seed_fallback);
  EXPECT_NE(lines.front().find("warning"), std::string::npos);
}

TEST(Digest, IsStableFnv1a) {
  EXPECT_EQ(digest_hex(""), "cbf29ce484222325");
  EXPECT_EQ(digest_hex("a"), "af63dc4c8601ec8c");
}
