#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "test_data.hpp"
#include "tskfit/fixture.hpp"
#include "tskfit/model_file.hpp"
#include "tskfit/stats.hpp"
#include "tskfit/table_io.hpp"

using namespace tskfit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "\t", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto known = testdata::known_two_rule();
    write_table(known.data, data());
  }
  std::string data() const { return dir.file("train.csv"); }
  std::string file(const std::string& n) const { return dir.file(n); }
  testdata::TempDir dir;
};

TEST_F(CliTest, FitRecoversNoiselessTwoRuleData) {
  const auto r = run({"fit", "--data", data(), "--normalize", "none", "--max-rules", "2", "--model",
                      file("m.tskmodel.json"), "--report", file("r.json"), "--plot-data", file("p.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "rules"), "2");
  const auto e = run({"eval", "--model", file("m.tskmodel.json"), "--data", data()});
  ASSERT_EQ(e.code, 0) << e.err;
  const double j = std::stod(value_of(e.out, "J"));
  const auto table = read_table(data(), "y");
  EXPECT_LE(j, 1e-6 * rms(table.output()));
  EXPECT_TRUE(fs::exists(file("r.json")));
  EXPECT_TRUE(fs::exists(file("p.tsv")));
}

TEST_F(CliTest, PredictThenEvalReproducesReportJ) {
  ASSERT_EQ(run({"fit", "--data", data(), "--model", file("m.json"), "--report", file("r.json")}).code, 0);
  const auto p = run({"predict", "--model", file("m.json"), "--data", data(), "--out", file("pred.csv")});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto preds = read_table_file(file("pred.csv"));
  const auto truth = read_table(data(), "y");
  const double j_pred = performance_J(truth.output(), preds.values.col(0));
  const auto e = run({"eval", "--model", file("m.json"), "--data", data()});
  const auto report = read_text_file(file("r.json"));
  const auto pos = report.find("\"final\"");
  ASSERT_NE(pos, std::string::npos);
  const auto jpos = report.find("\"j\": ", pos);
  const double j_report = std::stod(report.substr(jpos + 5));
  EXPECT_NEAR(j_pred, j_report, 1e-10);
  EXPECT_NEAR(std::stod(value_of(e.out, "J")), j_report, 1e-10);
}

TEST_F(CliTest, CompareModelWithItselfHasZeroDeltas) {
  ASSERT_EQ(run({"fit", "--data", data(), "--model", file("m.json")}).code, 0);
  const auto c = run({"compare", "--model", file("m.json"), "--other", file("m.json"), "--data", data(), "--plot-data",
                      file("cmp.tsv")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("# max_abs_delta\t0\n"), std::string::npos) << c.out;
  std::istringstream in(c.out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("index", 0) == 0) continue;
    EXPECT_EQ(line.substr(line.rfind('\t') + 1), "0") << line;
  }
}

TEST_F(CliTest, RepeatedFitsAreByteIdentical) {
  for (const char* tag : {"a", "b"}) {
    const std::string t(tag);
    ASSERT_EQ(run({"fit", "--data", data(), "--model", file(t + ".json"), "--report", file(t + ".r.json"),
                   "--plot-data", file(t + ".tsv")})
                  .code,
              0);
  }
  EXPECT_EQ(read_text_file(file("a.json")), read_text_file(file("b.json")));
  EXPECT_EQ(read_text_file(file("a.r.json")), read_text_file(file("b.r.json")));
  EXPECT_EQ(read_text_file(file("a.tsv")), read_text_file(file("b.tsv")));
}

TEST_F(CliTest, ReportRecordsEveryDefault) {
  ASSERT_EQ(run({"fit", "--data", data(), "--model", file("m.json"), "--report", file("r.json")}).code, 0);
  const auto report = read_text_file(file("r.json"));
  for (const char* key : {"\"epsilon\": \"0.01\"", "\"max_rules\": \"8\"", "\"overlap\": \"0.25\"",
                          "\"elim_threshold\": \"0.05\"", "\"seed\": \"0\"", "\"normalize\": \"minmax\"",
                          "\"seed_mode\": \"exhaustive\"", "\"na\": \"0\"", "\"nb\": \"1\""}) {
    EXPECT_NE(report.find(key), std::string::npos) << key;
  }
  const auto model = read_model(file("m.json"));
  EXPECT_EQ(model.provenance.at("epsilon"), "0.01");
  EXPECT_EQ(model.provenance.at("trace_digest").size(), 16u);
}

TEST_F(CliTest, InvalidFlagsFailBeforeAnyFileIsWritten) {
  const auto r = run({"fit", "--data", data(), "--model", file("m.json"), "--normalize", "zscore"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_FALSE(fs::exists(file("m.json")));
  const auto r2 = run({"fit", "--data", data(), "--model", file("m.json"), "--epsilon", "-1"});
  EXPECT_NE(r2.code, 0);
  EXPECT_FALSE(fs::exists(file("m.json")));
  const auto r3 = run({"fit", "--data", data(), "--model", data()});
  EXPECT_NE(r3.code, 0);
  EXPECT_TRUE(fs::exists(data()));
}

TEST_F(CliTest, FailedFitLeavesNoArtifacts) {
  write_text_file(file("bad.csv"), "x1,y\n1,2\nfoo,3\n");
  const auto r = run({"fit", "--data", file("bad.csv"), "--model", file("m.json"), "--report", file("r.json")});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_FALSE(fs::exists(file("m.json")));
  EXPECT_FALSE(fs::exists(file("r.json")));
}

TEST_F(CliTest, UnwritableOutputRemovesPartialArtifacts) {
  const auto r = run({"fit", "--data", data(), "--model", file("m.json"), "--report", file("no/such/dir/r.json")});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(file("m.json")));
}

TEST_F(CliTest, HelpListsAllFlagsWithDefaults) {
  const auto r = run({"fit", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--data", "--output-col", "--features", "--normalize", "--epsilon", "--max-rules",
                           "--seed-mode", "--overlap", "--elim-threshold", "--na", "--nb", "--seed", "--model",
                           "--report", "--plot-data"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
  for (const char* def : {"[0.01]", "[8]", "[0.25]", "[0.05]", "[minmax]", "[exhaustive]", "[y]"}) {
    EXPECT_NE(r.out.find(def), std::string::npos) << def;
  }
}

TEST_F(CliTest, CorrPrintsRanking) {
  const auto r = run({"corr", "--data", data(), "--features", "s=x1+x2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("rank\tcolumn\tcorr"), std::string::npos);
  EXPECT_NE(r.out.find("\ts\t"), std::string::npos);
}

TEST_F(CliTest, FeaturesFromFile) {
  write_text_file(file("features.txt"), "# derived\na=x1\nb=x1*x2\n");
  const auto r = run({"fit", "--data", data(), "--features", "@" + file("features.txt"), "--model", file("m.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_model(file("m.json")).model.input_names(), (std::vector<std::string>{"a", "b"}));
}

TEST_F(CliTest, GenIsDeterministicPerSeed) {
  for (const char* n : {"g1.csv", "g2.csv"}) {
    ASSERT_EQ(run({"gen", "--fixture", "--out", file(n), "--noise", "0.5", "--samples", "20", "--ranges",
                   "v1=1:2; v2=0.2:3"})
                  .code,
              0);
  }
  EXPECT_EQ(read_text_file(file("g1.csv")), read_text_file(file("g2.csv")));
  ASSERT_EQ(run({"gen", "--fixture", "--out", file("g3.csv"), "--noise", "0.5", "--samples", "20", "--seed", "1"}).code,
            0);
  EXPECT_NE(read_text_file(file("g1.csv")), read_text_file(file("g3.csv")));
}

TEST_F(CliTest, DemoFuzzyBeatsRegression) {
  const auto r = run({"demo"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "fuzzy_beats_regression"), "yes") << r.out;
}

TEST_F(CliTest, DemoAbortsOnTamperedFixture) {
  auto text = std::string(bundled_fixture_text());
  text.replace(text.find("4.954"), 5, "4.955");
  write_text_file(file("fx.json"), text);
  const auto r = run({"demo", "--fixture", file("fx.json"), "--model", file("m.json")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("IntegrityFailure"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(file("m.json")));
}

// Noiseless recovery of the five-rule furnace surrogate. The surrogate's
// premise (overlapping m9 sets, non-complementary m5 sets per m9 band) lies
// outside the quantile-split family the search builds, so this is expected
// to miss the 0.1% target; see the project notes.
TEST_F(CliTest, DemoNoiselessRelativeErrorBelowTenthOfAPercent) {
  const auto r = run({"demo", "--noise", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  double rel = -1.0;
  while (std::getline(in, line)) {
    if (line.rfind("fuzzy\t", 0) == 0) rel = std::stod(line.substr(line.rfind('\t') + 1));
  }
  EXPECT_LT(rel, 1e-3) << r.out;
}

TEST(CliUsage, UnknownSubcommandIsUsageError) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::run({"frobnicate"}, out, err), cli::kExitUsage);
  EXPECT_EQ(cli::run({}, out, err), cli::kExitUsage);
}
