#include "tskfit/fixture.hpp"

#include "tskfit/error.hpp"
#include "tskfit/identify.hpp"

namespace tskfit {

namespace {

constexpr std::size_t kM5 = 4;
constexpr std::size_t kM9 = 8;

FuzzyRule furnace_rule(MembershipFunction m9, MembershipFunction m5, double intercept,
                       std::vector<double> coefficients) {
  FuzzyRule rule;
  rule.premise = {{kM9, std::move(m9)}, {kM5, std::move(m5)}};
  rule.intercept = intercept;
  rule.coefficients = std::move(coefficients);
  rule.active.assign(rule.coefficients.size(), true);
  rule.active[2] = false;  // m3
  return rule;
}

}  // namespace

ModelDocument furnace_rule_base() {
  using MF = MembershipFunction;
  std::vector<FuzzyRule> rules{
      furnace_rule(MF::small(0.08, 0.64), MF::small(0.03, 0.88), 4.954,
                   {884.72, 19.55, 0, -7.36, 0, -42.947, 0.017, 0.37, 45.95}),
      furnace_rule(MF::small(0.08, 0.64), MF::big(0.04, 1.48), 2.778,
                   {-194.5, 0.173, 0, 1.4992, -16.67, 6.3754, 0.0113, 0.073, 5091.22}),
      furnace_rule(MF::big(0.18, 1.0), MF::small(0.027, 0.88), -240.499,
                   {384.4, 10.35, 0, 3.42, 0, -18.67, 0.029, 0.7536, 87.81}),
      furnace_rule(MF::medium(0.18, 1.0, 1.7, 2.16), MF::big(-0.41, 1.48), 1.031,
                   {2.5718, 0.0475, 0, 0.077, 4.3832, 0.3942, 0.0496, 0.0067, -88.6309}),
      furnace_rule(MF::big(1.8, 3.0), MF::big(0.14, 1.48), 18.195,
                   {-10.89, 0.39, 0, 0.284, 14.74, 3.076, 0.714, -0.1263, -15.8874}),
  };
  std::vector<std::string> inputs{"m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8", "m9"};
  std::vector<FeatureExpr> features;
  const char* exprs[] = {"v1", "v2", "v1*v4+v3", "v1*v2", "v4", "v5", "v6", "v1*v5", "v2/v1"};
  for (std::size_t i = 0; i < inputs.size(); ++i) features.push_back(FeatureExpr::parse(exprs[i], inputs[i]));

  return ModelDocument{
      kModelFormatVersion,
      "y",
      std::move(features),
      LagSpec{},
      NormalizationSpec::identity(inputs),
      FuzzyModel(inputs, std::move(rules)),
      {{"source", "UHP furnace active-power rule base R1-R5 (published values, verbatim)"},
       {"normalization", "published breakpoints refer to an unrecorded scaling; stored as identity"}},
      "Membership parameters are verbatim. On m9, rule 3 B[0.18,1.0] overlaps rule 4 M[0.18,1.0,1.7,2.16] and "
      "disagrees with rule 5 B[1.8,3.0]; they are not reconciled. The zero m5 coefficients of rules 1 and 3 are kept "
      "as fitted zeros; only m3 is marked eliminated.",
  };
}

ModelDocument load_verified_fixture(std::string_view text) {
  const auto digest = digest_hex(std::string(text));
  if (digest != kFurnaceFixtureDigest) {
    throw Error(ErrorKind::IntegrityFailure, "rule-base fixture digest " + digest + " does not match expected " +
                                                 std::string(kFurnaceFixtureDigest));
  }
  return parse_model(text);
}

}  // namespace tskfit
