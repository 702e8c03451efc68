#include "tskfit/dataset.hpp"

#include <set>

#include "tskfit/error.hpp"

namespace tskfit {

Dataset::Dataset(std::vector<std::string> input_names, std::string output_name, Eigen::MatrixXd inputs,
                 Eigen::VectorXd output)
    : input_names_(std::move(input_names)),
      output_name_(std::move(output_name)),
      inputs_(std::move(inputs)),
      output_(std::move(output)) {
  if (output_.size() < 1) throw Error(ErrorKind::TooFewRows, "a dataset needs at least one sample");
  if (inputs_.rows() != output_.size()) {
    throw Error(ErrorKind::ArityMismatch, "input rows and output length differ");
  }
  if (static_cast<std::size_t>(inputs_.cols()) != input_names_.size()) {
    throw Error(ErrorKind::ArityMismatch, "input column count and name count differ");
  }
  std::set<std::string> seen;
  for (const auto& name : names()) {
    if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty column name");
    if (!seen.insert(name).second) throw Error(ErrorKind::InvalidArgument, "duplicate column name '" + name + "'");
  }
  for (Eigen::Index i = 0; i < inputs_.rows(); ++i) {
    const auto row = static_cast<std::size_t>(i) + 1;
    if (!std::isfinite(output_(i))) throw Error(ErrorKind::NonFinite, "non-finite output value", row);
    for (Eigen::Index j = 0; j < inputs_.cols(); ++j) {
      if (!std::isfinite(inputs_(i, j))) {
        throw Error(ErrorKind::NonFinite, "non-finite value in column '" + input_names_[j] + "'", row);
      }
    }
  }
}

std::vector<std::string> Dataset::names() const {
  auto all = input_names_;
  all.push_back(output_name_);
  return all;
}

std::vector<double> Dataset::row(std::size_t i) const {
  std::vector<double> x(arity());
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = inputs_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return x;
}

std::optional<std::size_t> Dataset::input_index(const std::string& name) const {
  for (std::size_t j = 0; j < input_names_.size(); ++j) {
    if (input_names_[j] == name) return j;
  }
  return std::nullopt;
}

Dataset Dataset::with_output(Eigen::VectorXd output) const {
  return Dataset(input_names_, output_name_, inputs_, std::move(output));
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.input_names_ == b.input_names_ && a.output_name_ == b.output_name_ &&
         a.inputs_.rows() == b.inputs_.rows() && a.inputs_.cols() == b.inputs_.cols() && a.inputs_ == b.inputs_ &&
         a.output_ == b.output_;
}

}  // namespace tskfit
