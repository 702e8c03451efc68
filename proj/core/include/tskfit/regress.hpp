#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tskfit/dataset.hpp"

namespace tskfit {

// Affine regression y = intercept + coefficients . x. Eliminated variables
// have active[j] == false and coefficients[j] == 0 exactly.
struct LinearModel {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
  std::vector<bool> active;

  std::size_t active_count() const;
};

Eigen::VectorXd linear_predict(const LinearModel& model, const Eigen::MatrixXd& x);

// ARX orders: lagged outputs y(t-1..t-na) and lagged inputs m(t-1..t-nb).
struct LagSpec {
  std::size_t na = 0;
  std::size_t nb = 1;

  // na = 0, nb = 1 is used as the static (unlagged) regression by the fit pipeline.
  bool is_static() const noexcept { return na == 0 && nb == 1; }

  friend bool operator==(const LagSpec&, const LagSpec&) = default;
};

// Design with, for every input column c, the columns c[t-1] .. c[t-nb]
// followed by y[t-1] .. y[t-na]. The first max(na, nb) rows are dropped.
Dataset lag_expand(const Dataset& ds, const LagSpec& spec);

// Ordinary least squares with intercept. Solved through the normal equations
// (Jacobi-equilibrated LDLT with one refinement step); a rank-deficient
// system falls back to a ridge of 1e-10 on the equilibrated diagonal.
LinearModel ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Minimizes sum_k w_k (y_k - yhat_k)^2. Rows with w_k == 0 do not contribute.
LinearModel wls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w);

// As wls_fit, restricted to the columns with active[j] set.
LinearModel wls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                    const std::vector<bool>& active);

// Weighted least squares without an implicit intercept column.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, const Eigen::VectorXd& w);

// sqrt(sum w r^2 / sum w); plain RMSE for unit weights.
double weighted_rmse(const Eigen::VectorXd& residual, const Eigen::VectorXd& w);

struct EliminationStep {
  std::size_t removed = 0;
  std::string name;
  double j_before = 0.0;
  double j_after = 0.0;
};

struct EliminationResult {
  LinearModel model;
  double j = 0.0;
  std::vector<EliminationStep> trace;
};

// Backward elimination of regressors. Each round refits without every
// remaining variable and drops the one giving the smallest J (equal J: the
// higher column index goes). Stops when that J exceeds the current one by
// more than threshold * J (plus a rounding allowance of 1e-12 * max(1, rms(y)))
// or when one variable remains. J is the weighted RMSE; `w` empty means unit
// weights. `names` labels the trace and may be empty.
EliminationResult backward_eliminate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double threshold,
                                     const std::vector<std::string>& names = {}, const Eigen::VectorXd& w = {});

inline constexpr double kDefaultEliminationThreshold = 0.05;

}  // namespace tskfit
