#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "tskfit/dataset.hpp"
#include "tskfit/model.hpp"

namespace tskfit {

inline constexpr const char* kPlotDataHeader = "index\tactual\tfuzzy\tbaseline\tfuzzy_residual\tbaseline_residual";

// Six tab-separated columns per sample (1-based index, measured output, the
// two model outputs, and actual - predicted for each), header first, LF endings.
std::string format_plot_data(const Eigen::VectorXd& actual, const Eigen::VectorXd& fuzzy,
                             const Eigen::VectorXd& baseline);

// `data` is in model space (already transformed). Inference errors carry
// the 1-based row number.
std::string plot_data(const FuzzyModel& model, const FuzzyModel& baseline, const Dataset& data);
void emit_plot_data(const FuzzyModel& model, const FuzzyModel& baseline, const Dataset& data,
                    const std::filesystem::path& path);

}  // namespace tskfit
