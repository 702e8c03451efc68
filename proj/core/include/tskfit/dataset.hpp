#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tskfit {

// Row-aligned samples: p rows of m named inputs plus one named output.
// All entries finite, p >= 1, names unique.
class Dataset {
 public:
  Dataset(std::vector<std::string> input_names, std::string output_name, Eigen::MatrixXd inputs,
          Eigen::VectorXd output);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(inputs_.rows()); }
  std::size_t arity() const noexcept { return input_names_.size(); }

  const std::vector<std::string>& input_names() const noexcept { return input_names_; }
  const std::string& output_name() const noexcept { return output_name_; }
  // Inputs followed by the output.
  std::vector<std::string> names() const;

  const Eigen::MatrixXd& inputs() const noexcept { return inputs_; }
  const Eigen::VectorXd& output() const noexcept { return output_; }

  std::vector<double> row(std::size_t i) const;
  std::optional<std::size_t> input_index(const std::string& name) const;

  Dataset with_output(Eigen::VectorXd output) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::vector<std::string> input_names_;
  std::string output_name_;
  Eigen::MatrixXd inputs_;
  Eigen::VectorXd output_;
};

}  // namespace tskfit
