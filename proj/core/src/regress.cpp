#include "tskfit/regress.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "tskfit/error.hpp"

namespace tskfit {

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kRidge = 1e-10;

// Solves the symmetric positive semi-definite system a * beta = b.
Eigen::VectorXd solve_normal_equations(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.rows();
  if (n == 0) return Eigen::VectorXd();
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) scale(i) = a(i, i) > 0.0 ? 1.0 / std::sqrt(a(i, i)) : 1.0;
  Eigen::MatrixXd scaled = scale.asDiagonal() * a * scale.asDiagonal();
  const Eigen::VectorXd rhs = scale.asDiagonal() * b;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
  bool deficient = ldlt.info() != Eigen::Success;
  if (!deficient) {
    const auto d = ldlt.vectorD().cwiseAbs();
    deficient = !(d.minCoeff() > kRankTolerance * d.maxCoeff()) || !ldlt.isPositive();
  }
  if (deficient) {
    scaled.diagonal().array() += kRidge;
    ldlt.compute(scaled);
  }
  Eigen::VectorXd z = ldlt.solve(rhs);
  z += ldlt.solve(rhs - scaled * z);
  Eigen::VectorXd beta = scale.asDiagonal() * z;
  if (!beta.allFinite()) throw Error(ErrorKind::DegenerateDesign, "least-squares solution is not finite");
  return beta;
}

void check_problem(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
  if (x.rows() != y.size()) throw Error(ErrorKind::ArityMismatch, "design rows and response length differ");
  if (w.size() != y.size()) throw Error(ErrorKind::ArityMismatch, "weight and response lengths differ");
  if (y.size() == 0) throw Error(ErrorKind::TooFewRows, "least squares on an empty problem");
  if ((w.array() < 0.0).any() || !w.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "weights must be finite and non-negative");
  }
  if (!(w.sum() > 0.0)) throw Error(ErrorKind::InvalidArgument, "all weights are zero");
}

// Weighted Gram system of [1, x] with y, accumulated row by row so that rows
// of zero weight leave the sums bit-identical to omitting them.
class WeightedGram {
 public:
  WeightedGram(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w) : x_(x), y_(y), w_(w) {
    const Eigen::Index n = x.cols() + 1;
    gram_ = Eigen::MatrixXd::Zero(n, n);
    rhs_ = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd row(n);
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
      const double wk = w(k);
      if (wk == 0.0) continue;
      row(0) = 1.0;
      row.tail(n - 1) = x.row(k).transpose();
      for (Eigen::Index i = 0; i < n; ++i) {
        const double wi = wk * row(i);
        rhs_(i) += wi * y(k);
        for (Eigen::Index j = i; j < n; ++j) gram_(i, j) += wi * row(j);
      }
    }
    gram_.triangularView<Eigen::StrictlyLower>() = gram_.transpose().triangularView<Eigen::StrictlyLower>();
  }

  LinearModel fit(const std::vector<bool>& active) const {
    std::vector<Eigen::Index> idx{0};
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (active[j]) idx.push_back(static_cast<Eigen::Index>(j) + 1);
    }
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      b(i) = rhs_(idx[i]);
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gram_(idx[i], idx[j]);
    }
    const Eigen::VectorXd beta = solve_normal_equations(a, b);
    LinearModel model;
    model.intercept = beta(0);
    model.coefficients = Eigen::VectorXd::Zero(x_.cols());
    model.active = active;
    for (Eigen::Index i = 1; i < n; ++i) model.coefficients(idx[i] - 1) = beta(i);
    return model;
  }

  double rmse(const LinearModel& model) const { return weighted_rmse(y_ - linear_predict(model, x_), w_); }

 private:
  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  const Eigen::VectorXd& w_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd rhs_;
};

}  // namespace

std::size_t LinearModel::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

Eigen::VectorXd linear_predict(const LinearModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.coefficients.size()) {
    throw Error(ErrorKind::ArityMismatch, "design has " + std::to_string(x.cols()) + " columns, model expects " +
                                              std::to_string(model.coefficients.size()));
  }
  return (x * model.coefficients).array() + model.intercept;
}

Dataset lag_expand(const Dataset& ds, const LagSpec& spec) {
  if (spec.nb < 1) throw Error(ErrorKind::InvalidArgument, "input lag order nb must be at least 1");
  const std::size_t drop = std::max(spec.na, spec.nb);
  const std::size_t p = ds.rows();
  if (p <= drop) {
    throw Error(ErrorKind::TooFewRows, "lag expansion needs more than " + std::to_string(drop) + " rows, got " +
                                           std::to_string(p));
  }
  const auto rows = static_cast<Eigen::Index>(p - drop);
  const std::size_t m = ds.arity();
  Eigen::MatrixXd out(rows, static_cast<Eigen::Index>(m * spec.nb + spec.na));
  Eigen::VectorXd y(rows);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t lag = 1; lag <= spec.nb; ++lag) names.push_back(ds.input_names()[c] + "[t-" + std::to_string(lag) + "]");
  }
  for (std::size_t lag = 1; lag <= spec.na; ++lag) names.push_back(ds.output_name() + "[t-" + std::to_string(lag) + "]");

  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto t = static_cast<Eigen::Index>(drop) + r;
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t lag = 1; lag <= spec.nb; ++lag) {
        out(r, col++) = ds.inputs()(t - static_cast<Eigen::Index>(lag), static_cast<Eigen::Index>(c));
      }
    }
    for (std::size_t lag = 1; lag <= spec.na; ++lag) out(r, col++) = ds.output()(t - static_cast<Eigen::Index>(lag));
    y(r) = ds.output()(t);
  }
  return Dataset(std::move(names), ds.output_name(), std::move(out), std::move(y));
}

LinearModel ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return wls_fit(x, y, Eigen::VectorXd::Ones(y.size()));
}

LinearModel wls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
  return wls_fit(x, y, w, std::vector<bool>(static_cast<std::size_t>(x.cols()), true));
}

LinearModel wls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                    const std::vector<bool>& active) {
  check_problem(x, y, w);
  if (active.size() != static_cast<std::size_t>(x.cols())) {
    throw Error(ErrorKind::ArityMismatch, "active mask length differs from design width");
  }
  return WeightedGram(x, y, w).fit(active);
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
  check_problem(z, y, w);
  const Eigen::Index n = z.cols();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < z.rows(); ++k) {
    const double wk = w(k);
    if (wk == 0.0) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double wi = wk * z(k, i);
      if (wi == 0.0) continue;
      b(i) += wi * y(k);
      for (Eigen::Index j = i; j < n; ++j) a(i, j) += wi * z(k, j);
    }
  }
  a.triangularView<Eigen::StrictlyLower>() = a.transpose().triangularView<Eigen::StrictlyLower>();
  return solve_normal_equations(a, b);
}

double weighted_rmse(const Eigen::VectorXd& residual, const Eigen::VectorXd& w) {
  if (residual.size() != w.size()) throw Error(ErrorKind::ArityMismatch, "residual and weight lengths differ");
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index k = 0; k < residual.size(); ++k) {
    if (w(k) == 0.0) continue;
    num += w(k) * residual(k) * residual(k);
    den += w(k);
  }
  if (!(den > 0.0)) throw Error(ErrorKind::InvalidArgument, "all weights are zero");
  return std::sqrt(num / den);
}

EliminationResult backward_eliminate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double threshold,
                                     const std::vector<std::string>& names, const Eigen::VectorXd& w_in) {
  if (!(threshold >= 0.0)) throw Error(ErrorKind::InvalidArgument, "elimination threshold must be >= 0");
  const Eigen::VectorXd w = w_in.size() == 0 ? Eigen::VectorXd::Ones(y.size()) : w_in;
  check_problem(x, y, w);
  if (!names.empty() && names.size() != static_cast<std::size_t>(x.cols())) {
    throw Error(ErrorKind::ArityMismatch, "elimination names do not match design width");
  }
  const WeightedGram gram(x, y, w);
  const double allowance = 1e-12 * std::max(1.0, weighted_rmse(y, w));

  std::vector<bool> active(static_cast<std::size_t>(x.cols()), true);
  EliminationResult result;
  result.model = gram.fit(active);
  result.j = gram.rmse(result.model);

  while (std::count(active.begin(), active.end(), true) > 1) {
    std::size_t best_var = 0;
    LinearModel best_model;
    double best_j = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (!active[j]) continue;
      auto trial = active;
      trial[j] = false;
      LinearModel candidate = gram.fit(trial);
      const double cj = gram.rmse(candidate);
      if (cj <= best_j) {
        best_j = cj;
        best_var = j;
        best_model = std::move(candidate);
      }
    }
    if (!std::isinf(threshold) && best_j - result.j > threshold * result.j + allowance) break;
    active[best_var] = false;
    result.trace.push_back({best_var, names.empty() ? "x" + std::to_string(best_var + 1) : names[best_var], result.j,
                            best_j});
    result.model = std::move(best_model);
    result.j = best_j;
  }
  return result;
}

}  // namespace tskfit
