#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "tskfit/error.hpp"
#include "tskfit/fixture.hpp"
#include "tskfit/identify.hpp"
#include "tskfit/model_file.hpp"
#include "tskfit/pipeline.hpp"
#include "tskfit/plot_data.hpp"
#include "tskfit/report.hpp"
#include "tskfit/stats.hpp"
#include "tskfit/synthetic.hpp"
#include "tskfit/table_io.hpp"

namespace tskfit::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string data;
  std::string output_col = "y";
  std::string features;
  std::string normalize = "minmax";
  double epsilon = SearchConfig{}.epsilon;
  std::size_t max_rules = SearchConfig{}.max_rules;
  std::string seed_mode = "exhaustive";
  std::string seed_extensions = "ranked";
  double overlap = SearchConfig{}.overlap;
  double elim_threshold = SearchConfig{}.elimination_threshold;
  std::size_t na = 0;
  std::size_t nb = 1;
  std::uint64_t seed = 0;
  bool refine_premise = false;
  std::string model;
  std::string other;
  std::string report;
  std::string plot_data;
  std::string out;
  std::size_t samples = 200;
  double noise = 0.0;
  std::size_t demo_samples = 400;
  double demo_noise = 0.01;
  std::string ranges;
  bool fixture = false;
  std::string fixture_path;
};

// Files produced by one run. Nothing touches disk until every artifact has
// been computed; if a write fails, whatever was already written is removed.
class Artifacts {
 public:
  void add(const std::string& path, std::string text) {
    if (!path.empty()) items_.emplace_back(path, std::move(text));
  }

  void commit() {
    std::vector<fs::path> written;
    try {
      for (const auto& [path, text] : items_) {
        write_text_file(path, text);
        written.push_back(path);
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) fs::remove(p, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

void require_distinct_outputs(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
  std::set<std::string> seen;
  for (const auto& o : outputs) {
    if (o.empty()) continue;
    const auto key = fs::weakly_canonical(o).string();
    if (!seen.insert(key).second) throw Error(ErrorKind::InvalidArgument, "output path '" + o + "' given twice");
    for (const auto& in : inputs) {
      if (!in.empty() && fs::weakly_canonical(in).string() == key) {
        throw Error(ErrorKind::InvalidArgument, "output path '" + o + "' would overwrite an input");
      }
    }
  }
}

std::vector<FeatureExpr> load_features(const std::string& spec) {
  if (spec.empty()) return {};
  if (spec.front() == '@') return parse_feature_list(read_text_file(spec.substr(1)));
  return parse_feature_list(spec);
}

SearchConfig search_config(const Options& o) {
  SearchConfig c;
  c.epsilon = o.epsilon;
  c.max_rules = o.max_rules;
  c.premise_seed = seed_mode_from_string(o.seed_mode);
  c.seed_extensions = seed_extensions_from_string(o.seed_extensions);
  c.overlap = o.overlap;
  c.elimination_threshold = o.elim_threshold;
  c.lag = LagSpec{o.na, o.nb};
  c.refine_premise = o.refine_premise;
  c.validate();
  return c;
}

std::map<std::string, std::string> config_record(const Options& o, const std::string& features) {
  return {
      {"data", o.data},
      {"output_col", o.output_col},
      {"features", features},
      {"normalize", o.normalize},
      {"epsilon", format_real(o.epsilon)},
      {"max_rules", std::to_string(o.max_rules)},
      {"seed_mode", o.seed_mode},
      {"seed_extensions", o.seed_extensions},
      {"overlap", format_real(o.overlap)},
      {"elim_threshold", format_real(o.elim_threshold)},
      {"na", std::to_string(o.na)},
      {"nb", std::to_string(o.nb)},
      {"seed", std::to_string(o.seed)},
      {"refine_premise", o.refine_premise ? "true" : "false"},
  };
}

std::string join_feature_text(const std::vector<FeatureExpr>& features) {
  std::string s;
  for (const auto& f : features) {
    if (!s.empty()) s += "; ";
    s += f.name() + "=" + f.text();
  }
  return s;
}

struct FitOutcome {
  ModelDocument document;
  FitReport report;
  std::string plot;
  SearchResult result;
};

FitOutcome run_fit(const Dataset& raw, const std::vector<FeatureExpr>& features, const Options& o,
                   const SearchConfig& config, const std::string& data_digest, std::ostream& err) {
  const auto mode = normalization_mode_from_string(o.normalize);
  const auto prepared = prepare_training_data(raw, features, config.lag, mode);
  const auto& data = prepared.data;
  auto result = identify(data, config, [&](const std::string& line) { err << line << '\n'; });

  const auto& names = data.input_names();
  const auto config_map = config_record(o, join_feature_text(features));
  const auto trace_text = serialize_trace(result.trace, names);

  ModelDocument doc{kModelFormatVersion, raw.output_name(), features, config.lag, prepared.normalization,
                    result.fit.model, {}, {}};
  doc.provenance = config_map;
  doc.provenance["dataset_digest"] = data_digest;
  doc.provenance["trace_digest"] = digest_hex(trace_text);
  doc.provenance["tool"] = "tskfit fit";

  const double y_rms = rms(data.output());
  FitReport report;
  report.dataset_digest = data_digest;
  report.rows = data.rows();
  report.model_inputs = names;
  report.output_name = data.output_name();
  report.correlation = corr_matrix(data);
  report.features = features;
  report.trace = result.trace;
  report.final_structure = result.structure.encode(names);
  report.final_rules = result.fit.model.rules().size();
  report.final_j = result.fit.j;
  report.final_relative_error = y_rms > 0.0 ? result.fit.j / y_rms : 0.0;
  report.eliminations = result.fit.eliminations;
  report.baseline_rule = result.baseline.model.rules().front();
  report.baseline_j = result.baseline.j;
  report.baseline_relative_error = y_rms > 0.0 ? result.baseline.j / y_rms : 0.0;
  report.config = config_map;

  auto plot = plot_data(result.fit.model, result.baseline.model, data);
  return {std::move(doc), std::move(report), std::move(plot), std::move(result)};
}

void print_summary(std::ostream& out, const FitOutcome& f) {
  out << "rules\t" << f.report.final_rules << '\n'
      << "structure\t" << f.report.final_structure << '\n'
      << "J\t" << format_real(f.report.final_j) << '\n'
      << "relative_error\t" << format_real(f.report.final_relative_error) << '\n'
      << "baseline_J\t" << format_real(f.report.baseline_j) << '\n'
      << "baseline_relative_error\t" << format_real(f.report.baseline_relative_error) << '\n'
      << "stop\t" << to_string(f.report.trace.stop) << '\n'
      << "evaluations\t" << f.report.trace.total_evaluations() << '\n';
}

// --- subcommands -----------------------------------------------------------

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = search_config(o);
  normalization_mode_from_string(o.normalize);
  require_distinct_outputs({o.data}, {o.model, o.report, o.plot_data});

  const auto features = load_features(o.features);
  const auto text = read_text_file(o.data);
  const auto raw = parse_table(text, o.data).to_dataset(o.output_col);
  const auto fit = run_fit(raw, features, o, config, digest_hex(text), err);

  Artifacts artifacts;
  artifacts.add(o.model, serialize_model(fit.document));
  artifacts.add(o.report, serialize_report(fit.report));
  artifacts.add(o.plot_data, fit.plot);
  artifacts.commit();
  print_summary(out, fit);
  return kExitOk;
}

int cmd_corr(const Options& o, std::ostream& out, std::ostream&) {
  const auto features = load_features(o.features);
  const auto raw = read_table(o.data, o.output_col);
  // Raw columns first, then the derived features.
  auto table = corr_matrix(raw);
  if (!features.empty()) {
    const auto derived = eval_features(raw, features);
    std::vector<std::string> names = raw.input_names();
    Eigen::MatrixXd x(raw.rows(), static_cast<Eigen::Index>(raw.arity() + derived.arity()));
    x << raw.inputs(), derived.inputs();
    for (const auto& n : derived.input_names()) {
      if (std::find(names.begin(), names.end(), n) != names.end()) {
        throw Error(ErrorKind::InvalidArgument, "feature name '" + n + "' clashes with a raw column");
      }
      names.push_back(n);
    }
    table = corr_matrix(Dataset(names, raw.output_name(), std::move(x), raw.output()));
  }

  const auto& n = table.names;
  out << "column";
  out << '\t' << raw.output_name();
  for (const auto& name : n) out << '\t' << name;
  out << '\n';
  for (std::size_t i = 0; i < n.size(); ++i) {
    out << n[i] << '\t' << format_real(table.output_corr[i]);
    for (std::size_t j = 0; j < n.size(); ++j) {
      out << '\t' << format_real(table.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
  out << "\nrank\tcolumn\tcorr\n";
  std::size_t rank = 1;
  for (auto idx : table.ranking()) {
    out << rank++ << '\t' << n[idx] << '\t' << format_real(table.output_corr[idx])
        << (table.degenerate[idx] ? "\t(constant)" : "") << '\n';
  }
  return kExitOk;
}

std::string prediction_text(const std::string& column, const Eigen::VectorXd& values) {
  std::string s = column + "\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) s += format_real(values(i)) + "\n";
  return s;
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream&) {
  require_distinct_outputs({o.data, o.model}, {o.out});
  const auto doc = read_model(o.model);
  const auto raw = dataset_for_model(doc, read_table_file(o.data), false);
  const auto text = prediction_text(doc.output_name + "_predicted", predict(doc, raw));
  if (o.out.empty()) {
    out << text;
  } else {
    Artifacts a;
    a.add(o.out, text);
    a.commit();
  }
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream&) {
  const auto doc = read_model(o.model);
  const auto raw = dataset_for_model(doc, read_table_file(o.data), true);
  const auto e = evaluate(doc, raw);
  out << "rows\t" << e.actual.size() << '\n'
      << "J\t" << format_real(e.j) << '\n'
      << "relative_error\t" << format_real(e.relative_error) << '\n';
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream&) {
  require_distinct_outputs({o.data, o.model, o.other}, {o.plot_data});
  const auto a = read_model(o.model);
  const auto b = read_model(o.other);
  const auto table = read_table_file(o.data);
  const auto ea = evaluate(a, dataset_for_model(a, table, true));
  const auto eb = evaluate(b, dataset_for_model(b, table, true));
  if (ea.actual.size() != eb.actual.size() || ea.actual != eb.actual) {
    throw Error(ErrorKind::ArityMismatch,
                "the two models do not score the same samples (different output column or lag depth)");
  }
  const Eigen::VectorXd delta = ea.predicted - eb.predicted;
  const auto plot = format_plot_data(ea.actual, ea.predicted, eb.predicted);
  Artifacts artifacts;
  artifacts.add(o.plot_data, plot);
  artifacts.commit();

  out << "# model\tJ\trelative_error\n"
      << "# " << o.model << '\t' << format_real(ea.j) << '\t' << format_real(ea.relative_error) << '\n'
      << "# " << o.other << '\t' << format_real(eb.j) << '\t' << format_real(eb.relative_error) << '\n'
      << "# max_abs_delta\t" << format_real(delta.size() ? delta.cwiseAbs().maxCoeff() : 0.0) << '\n'
      << "index\tactual\tmodel\tother\tdelta\n";
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    out << i + 1 << '\t' << format_real(ea.actual(i)) << '\t' << format_real(ea.predicted(i)) << '\t'
        << format_real(eb.predicted(i)) << '\t' << format_real(delta(i)) << '\n';
  }
  return kExitOk;
}

std::vector<InputRange> parse_ranges(const std::string& text) {
  // "v1=1:2; v2=0.2:3.5"
  std::vector<InputRange> ranges;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) {
    std::erase_if(item, [](unsigned char c) { return std::isspace(c); });
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const auto colon = item.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos || eq == 0) {
      throw Error(ErrorKind::InvalidArgument, "range '" + item + "' is not of the form name=low:high");
    }
    try {
      std::size_t used = 0;
      const auto lo_text = item.substr(eq + 1, colon - eq - 1);
      const auto hi_text = item.substr(colon + 1);
      const double lo = std::stod(lo_text, &used);
      if (used != lo_text.size()) throw std::invalid_argument("low");
      const double hi = std::stod(hi_text, &used);
      if (used != hi_text.size()) throw std::invalid_argument("high");
      ranges.push_back({item.substr(0, eq), lo, hi});
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "range '" + item + "' has a non-numeric bound");
    }
  }
  return ranges;
}

ModelDocument generator_document(const Options& o) {
  if (o.fixture) return load_verified_fixture(bundled_fixture_text());
  return read_model(o.model);
}

int cmd_gen(const Options& o, std::ostream& out, std::ostream&) {
  if (o.fixture == !o.model.empty()) throw Error(ErrorKind::InvalidArgument, "give exactly one of --model or --fixture");
  if (!(o.noise >= 0.0)) throw Error(ErrorKind::InvalidArgument, "--noise must be >= 0");
  const auto ranges = parse_ranges(o.ranges);
  require_distinct_outputs({o.model}, {o.out});

  GeneratorSpec spec{generator_document(o), ranges, o.samples, o.noise, o.seed};
  const auto ds = gen_synthetic(spec);
  Artifacts a;
  a.add(o.out, format_table(ds));
  a.commit();
  out << "rows\t" << ds.rows() << '\n' << "columns\t" << ds.arity() + 1 << '\n';
  return kExitOk;
}

// Raw-variable sampling box for the furnace surrogate: v2/v1 spans the m9
// premise sets and v4 the m5 sets.
std::vector<InputRange> furnace_surrogate_ranges() {
  return {{"v1", 1.0, 2.0}, {"v2", 0.2, 5.0}, {"v4", 0.05, 1.4},
          {"v3", 0.0, 1.0}, {"v5", 0.0, 1.0}, {"v6", 0.0, 1.0}};
}

int cmd_demo(const Options& o, std::ostream& out, std::ostream& err) {
  if (!(o.demo_noise >= 0.0)) throw Error(ErrorKind::InvalidArgument, "--noise must be >= 0");
  const auto config = search_config(o);
  normalization_mode_from_string(o.normalize);
  require_distinct_outputs({o.fixture_path}, {o.data, o.model, o.report, o.plot_data});

  const auto truth = o.fixture_path.empty() ? load_verified_fixture(bundled_fixture_text())
                                            : load_verified_fixture(read_text_file(o.fixture_path));
  GeneratorSpec spec{truth, furnace_surrogate_ranges(), o.demo_samples, 0.0, o.seed};
  const auto clean = gen_synthetic(spec);
  // Noise is scaled to the noiseless output so --noise reads as a fraction.
  const double sigma = o.demo_noise * rms(clean.output());
  spec.noise_sigma = sigma;
  const auto raw = sigma > 0.0 ? gen_synthetic(spec) : clean;

  const auto table_text = format_table(raw);
  auto opts = o;
  opts.data = o.data.empty() ? "<furnace surrogate>" : o.data;
  const auto fit = run_fit(raw, truth.features, opts, config, digest_hex(table_text), err);

  Artifacts artifacts;
  artifacts.add(o.data, table_text);
  artifacts.add(o.model, serialize_model(fit.document));
  artifacts.add(o.report, serialize_report(fit.report));
  artifacts.add(o.plot_data, fit.plot);
  artifacts.commit();

  const double truth_j = performance_J(raw.output(), clean.output());
  const bool dominates = fit.report.final_j < fit.report.baseline_j;
  out << "surrogate\t" << raw.rows() << " samples from the bundled five-rule furnace model\n"
      << "noise_sigma\t" << format_real(sigma) << '\n'
      << "noise_J\t" << format_real(truth_j) << '\n'
      << "model\trules\tJ\trelative_error\n"
      << "fuzzy\t" << fit.report.final_rules << '\t' << format_real(fit.report.final_j) << '\t'
      << format_real(fit.report.final_relative_error) << '\n'
      << "regression\t1\t" << format_real(fit.report.baseline_j) << '\t'
      << format_real(fit.report.baseline_relative_error) << '\n'
      << "fuzzy_beats_regression\t" << (dominates ? "yes" : "no") << '\n';
  return kExitOk;
}

// --- option wiring ---------------------------------------------------------

void add_data(CLI::App& app, Options& o, bool required) {
  auto* opt = app.add_option("--data", o.data, "Input table (CSV or TSV with a header row)");
  if (required) opt->required();
}

void add_output_col(CLI::App& app, Options& o) {
  app.add_option("--output-col", o.output_col, "Output column name")->capture_default_str();
}

void add_features(CLI::App& app, Options& o) {
  app.add_option("--features", o.features,
                 "Derived inputs, e.g. \"m1=v1; m9=v2/v1\"; '@path' reads the list from a file. Empty: use raw "
                 "columns");
}

void add_search(CLI::App& app, Options& o) {
  app.add_option("--normalize", o.normalize, "Input scaling")
      ->check(CLI::IsMember({"none", "minmax"}))
      ->capture_default_str();
  app.add_option("--epsilon", o.epsilon, "Stop when |J(i)-J(i-1)|/J(i) < epsilon")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-rules", o.max_rules, "Largest rule count to try")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20))
      ->capture_default_str();
  app.add_option("--seed-mode", o.seed_mode, "Premise variable selection")
      ->check(CLI::IsMember({"exhaustive", "correlation"}))
      ->capture_default_str();
  app.add_option("--seed-extensions", o.seed_extensions,
                 "Correlation mode only: 'ranked' adds variables in |corr| order, 'free' only seeds the first "
                 "split")
      ->check(CLI::IsMember({"ranked", "free"}))
      ->capture_default_str();
  app.add_option("--overlap", o.overlap, "Membership overlap width between adjacent sets, in [0, 1)")
      ->check(CLI::Range(0.0, 0.999999999))
      ->capture_default_str();
  app.add_option("--elim-threshold", o.elim_threshold,
                 "Consequent elimination: largest tolerated relative J increase per removal")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--na", o.na, "Lagged outputs y(t-1..t-na) as inputs")->capture_default_str();
  app.add_option("--nb", o.nb, "Input lags u(t-1..t-nb); na=0, nb=1 is the static model")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--refine-premise", o.refine_premise, "Tune membership breakpoints of each selected structure")
      ->capture_default_str();
}

void add_seed(CLI::App& app, Options& o) {
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Takagi-Sugeno fuzzy model identification", "tskfit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset drawn from a model file");
  gen->add_option("--model", o.model, "Generator model file");
  gen->add_flag("--fixture", o.fixture, "Use the bundled five-rule furnace model as generator")
      ->capture_default_str();
  gen->add_option("--out", o.out, "Dataset file to write")->required();
  gen->add_option("--samples", o.samples, "Number of rows")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}))
      ->capture_default_str();
  gen->add_option("--noise", o.noise, "Gaussian noise standard deviation")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gen->add_option("--ranges", o.ranges, "Uniform sampling ranges, e.g. \"v1=1:2; v2=0:3\"");
  add_seed(*gen, o);

  auto* corr = app.add_subcommand("corr", "Print the correlation table of raw and derived columns");
  add_data(*corr, o, true);
  add_output_col(*corr, o);
  add_features(*corr, o);

  auto* fit = app.add_subcommand("fit", "Identify a fuzzy model and its single-rule regression baseline");
  add_data(*fit, o, true);
  add_output_col(*fit, o);
  add_features(*fit, o);
  add_search(*fit, o);
  add_seed(*fit, o);
  fit->add_option("--model", o.model, "Model file to write")->required();
  fit->add_option("--report", o.report, "Fit report (JSON) to write");
  fit->add_option("--plot-data", o.plot_data, "Actual/fuzzy/baseline columns (TSV) to write");

  auto* predict_cmd = app.add_subcommand("predict", "Predict the output column for a table");
  predict_cmd->add_option("--model", o.model, "Model file")->required();
  add_data(*predict_cmd, o, true);
  predict_cmd->add_option("--out", o.out, "Prediction file (default: standard output)");

  auto* eval_cmd = app.add_subcommand("eval", "Score a model on a labeled table");
  eval_cmd->add_option("--model", o.model, "Model file")->required();
  add_data(*eval_cmd, o, true);

  auto* compare = app.add_subcommand("compare", "Score two models on the same table, sample by sample");
  compare->add_option("--model", o.model, "First model file")->required();
  compare->add_option("--other", o.other, "Second model file")->required();
  add_data(*compare, o, true);
  compare->add_option("--plot-data", o.plot_data, "Actual/model/other columns (TSV) to write");

  auto* demo = app.add_subcommand("demo", "Fit fuzzy and regression models to a surrogate of the furnace rule base");
  demo->add_option("--samples", o.demo_samples, "Surrogate rows")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();
  demo->add_option("--noise", o.demo_noise, "Noise standard deviation as a fraction of the noiseless output RMS")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  demo->add_option("--fixture", o.fixture_path, "Rule-base file to use instead of the bundled one (digest-checked)");
  add_search(*demo, o);
  add_seed(*demo, o);
  demo->add_option("--data", o.data, "Surrogate dataset to write");
  demo->add_option("--model", o.model, "Model file to write");
  demo->add_option("--report", o.report, "Fit report (JSON) to write");
  demo->add_option("--plot-data", o.plot_data, "Actual/fuzzy/baseline columns (TSV) to write");

  std::vector<const char*> argv{"tskfit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out, err);
    if (corr->parsed()) return cmd_corr(o, out, err);
    if (fit->parsed()) return cmd_fit(o, out, err);
    if (predict_cmd->parsed()) return cmd_predict(o, out, err);
    if (eval_cmd->parsed()) return cmd_eval(o, out, err);
    if (compare->parsed()) return cmd_compare(o, out, err);
    if (demo->parsed()) return cmd_demo(o, out, err);
  } catch (const Error& e) {
    err << "tskfit: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "tskfit: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace tskfit::cli
