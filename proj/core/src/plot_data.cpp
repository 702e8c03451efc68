#include "tskfit/plot_data.hpp"

#include "tskfit/error.hpp"
#include "tskfit/table_io.hpp"

namespace tskfit {

std::string format_plot_data(const Eigen::VectorXd& actual, const Eigen::VectorXd& fuzzy,
                             const Eigen::VectorXd& baseline) {
  if (fuzzy.size() != actual.size() || baseline.size() != actual.size()) {
    throw Error(ErrorKind::ArityMismatch, "plot columns have different lengths");
  }
  std::string out = kPlotDataHeader;
  out += '\n';
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    out += std::to_string(i + 1);
    for (double v : {actual(i), fuzzy(i), baseline(i), actual(i) - fuzzy(i), actual(i) - baseline(i)}) {
      out += '\t';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

std::string plot_data(const FuzzyModel& model, const FuzzyModel& baseline, const Dataset& data) {
  return format_plot_data(data.output(), model.infer_batch(data.inputs()), baseline.infer_batch(data.inputs()));
}

void emit_plot_data(const FuzzyModel& model, const FuzzyModel& baseline, const Dataset& data,
                    const std::filesystem::path& path) {
  write_text_file(path, plot_data(model, baseline, data));
}

}  // namespace tskfit
