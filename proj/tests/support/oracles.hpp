#pragma once

// Reference computations for the tests. Everything here is written against
// plain std::vector with explicit loops and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Rows = std::vector<Vec>;  // row-major sample table

inline double naive_rmse(const Vec& y, const Vec& yhat) {
  long double acc = 0.0L;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const long double d = static_cast<long double>(y[k]) - static_cast<long double>(yhat[k]);
    acc += d * d;
  }
  return static_cast<double>(std::sqrt(acc / static_cast<long double>(y.size())));
}

inline double hand_pearson(const Vec& x, const Vec& y) {
  const auto n = static_cast<long double>(x.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Hyndman-Fan type 7: h = (n-1) q, linear interpolation between order statistics.
inline double quantile7(Vec v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Gaussian elimination with partial pivoting in extended precision.
inline Vec gauss_solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0.0L) throw std::runtime_error("singular normal equations");
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = static_cast<double>(s / a[i][i]);
  }
  return x;
}

// Weighted least squares with intercept via explicit normal equations.
// Returns {intercept, c_1, ..., c_m} over the selected columns `cols`
// (all columns when empty). Empty `w` means unit weights.
inline Vec normal_equations_fit(const Rows& x, const Vec& y, const Vec& w = {},
                                std::vector<std::size_t> cols = {}) {
  if (cols.empty() && !x.empty()) {
    for (std::size_t j = 0; j < x[0].size(); ++j) cols.push_back(j);
  }
  const std::size_t n = cols.size() + 1;
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n, 0.0L));
  std::vector<long double> b(n, 0.0L);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const long double wk = w.empty() ? 1.0L : w[k];
    std::vector<long double> z(n);
    z[0] = 1.0L;
    for (std::size_t j = 0; j < cols.size(); ++j) z[j + 1] = x[k][cols[j]];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] += wk * z[i] * z[j];
      b[i] += wk * z[i] * y[k];
    }
  }
  return gauss_solve(std::move(a), std::move(b));
}

inline double predict_affine(const Vec& beta, const Vec& row, const std::vector<std::size_t>& cols) {
  long double s = beta[0];
  for (std::size_t j = 0; j < cols.size(); ++j) s += static_cast<long double>(beta[j + 1]) * row[cols[j]];
  return static_cast<double>(s);
}

inline double subset_rmse(const Rows& x, const Vec& y, const std::vector<std::size_t>& cols) {
  const auto beta = normal_equations_fit(x, y, {}, cols);
  Vec yhat(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) yhat[k] = predict_affine(beta, x[k], cols);
  return naive_rmse(y, yhat);
}

// Column subset of the given size with the smallest training RMSE.
inline std::vector<std::size_t> best_subset(const Rows& x, const Vec& y, std::size_t size) {
  const std::size_t m = x[0].size();
  std::vector<std::size_t> best;
  double best_j = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) cols.push_back(j);
    }
    if (cols.size() != size) continue;
    const double j = subset_rmse(x, y, cols);
    if (j < best_j) {
      best_j = j;
      best = cols;
    }
  }
  return best;
}

// --- fuzzy-set and rule-base reference evaluation -----------------------

inline double shoulder_small(double x, double a, double b) {
  if (x <= a) return 1.0;
  if (x >= b) return 0.0;
  return (b - x) / (b - a);
}

inline double shoulder_big(double x, double a, double b) { return 1.0 - shoulder_small(x, a, b); }

inline double trapezoid(double x, double a, double b, double c, double d) {
  if (x <= a || x >= d) return 0.0;
  if (x < b) return (x - a) / (b - a);
  if (x <= c) return 1.0;
  return (d - x) / (d - c);
}

// Hand evaluation of the published five-rule furnace model at an m-vector
// (m[0] = m1 ... m[8] = m9). Weights: product of the m9 and m5 degrees.
inline double furnace_by_hand(const Vec& m) {
  const double m9 = m[8];
  const double m5 = m[4];
  const double w[5] = {
      shoulder_small(m9, 0.08, 0.64) * shoulder_small(m5, 0.03, 0.88),
      shoulder_small(m9, 0.08, 0.64) * shoulder_big(m5, 0.04, 1.48),
      shoulder_big(m9, 0.18, 1.0) * shoulder_small(m5, 0.027, 0.88),
      trapezoid(m9, 0.18, 1.0, 1.7, 2.16) * shoulder_big(m5, -0.41, 1.48),
      shoulder_big(m9, 1.8, 3.0) * shoulder_big(m5, 0.14, 1.48),
  };
  const double a0[5] = {4.954, 2.778, -240.499, 1.031, 18.195};
  const double c[5][9] = {
      {884.72, 19.55, 0, -7.36, 0, -42.947, 0.017, 0.37, 45.95},
      {-194.5, 0.173, 0, 1.4992, -16.67, 6.3754, 0.0113, 0.073, 5091.22},
      {384.4, 10.35, 0, 3.42, 0, -18.67, 0.029, 0.7536, 87.81},
      {2.5718, 0.0475, 0, 0.077, 4.3832, 0.3942, 0.0496, 0.0067, -88.6309},
      {-10.89, 0.39, 0, 0.284, 14.74, 3.076, 0.714, -0.1263, -15.8874},
  };
  long double num = 0, den = 0;
  for (int r = 0; r < 5; ++r) {
    long double yr = a0[r];
    for (int j = 0; j < 9; ++j) yr += static_cast<long double>(c[r][j]) * m[static_cast<std::size_t>(j)];
    num += w[r] * yr;
    den += w[r];
  }
  return static_cast<double>(num / den);
}

// --- TSK reference refit ----------------------------------------------------

inline double weighted_rms(const Vec& r, const Vec& w) {
  long double num = 0, den = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    num += static_cast<long double>(w[k]) * r[k] * r[k];
    den += w[k];
  }
  return static_cast<double>(std::sqrt(num / den));
}

inline double weighted_subset_rmse(const Rows& x, const Vec& y, const Vec& w, const std::vector<std::size_t>& cols) {
  const auto beta = normal_equations_fit(x, y, w, cols);
  Vec r(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) r[k] = y[k] - predict_affine(beta, x[k], cols);
  return weighted_rms(r, w);
}

// Greedy backward elimination: drop the column whose removal gives the
// smallest weighted RMSE (ties: higher index), stop once that RMSE exceeds
// the current one by more than threshold * J + 1e-12 * max(1, rms_w(y)).
// Returns the surviving column mask.
inline std::vector<bool> greedy_eliminate(const Rows& x, const Vec& y, const Vec& w, double threshold) {
  const std::size_t m = x[0].size();
  std::vector<bool> keep(m, true);
  auto cols_of = [&](const std::vector<bool>& mask) {
    std::vector<std::size_t> c;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask[j]) c.push_back(j);
    }
    return c;
  };
  const double allowance = 1e-12 * std::max(1.0, weighted_rms(y, w));
  double current = weighted_subset_rmse(x, y, w, cols_of(keep));
  for (std::size_t left = m; left > 1; --left) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t drop = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!keep[j]) continue;
      auto trial = keep;
      trial[j] = false;
      const double jt = weighted_subset_rmse(x, y, w, cols_of(trial));
      if (jt <= best) {
        best = jt;
        drop = j;
      }
    }
    if (best - current > threshold * current + allowance) break;
    keep[drop] = false;
    current = best;
  }
  return keep;
}

// Training RMSE of a TSK model over fixed normalized weights `wbar`
// (rows x rules): per-rule masks from greedy_eliminate, then one joint
// least-squares fit of all surviving consequent terms.
inline double tsk_refit_rmse(const Rows& x, const Vec& y, const Rows& wbar, double threshold) {
  const std::size_t p = x.size();
  const std::size_t rules = wbar[0].size();
  const std::size_t m = x[0].size();
  std::vector<std::vector<bool>> masks;
  for (std::size_t r = 0; r < rules; ++r) {
    Vec wr(p);
    for (std::size_t k = 0; k < p; ++k) wr[k] = wbar[k][r];
    masks.push_back(greedy_eliminate(x, y, wr, threshold));
  }
  // Design without an implicit intercept.
  Rows z(p);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t r = 0; r < rules; ++r) {
      z[k].push_back(wbar[k][r]);
      for (std::size_t j = 0; j < m; ++j) {
        if (masks[r][j]) z[k].push_back(wbar[k][r] * x[k][j]);
      }
    }
  }
  const std::size_t n = z[0].size();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n, 0.0L));
  std::vector<long double> b(n, 0.0L);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] += static_cast<long double>(z[k][i]) * z[k][j];
      b[i] += static_cast<long double>(z[k][i]) * y[k];
    }
  }
  const auto beta = gauss_solve(std::move(a), std::move(b));
  Vec yhat(p);
  for (std::size_t k = 0; k < p; ++k) {
    long double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<long double>(beta[i]) * z[k][i];
    yhat[k] = static_cast<double>(s);
  }
  return naive_rmse(y, yhat);
}

// Two-rule split of the whole space along `var`: S/B shoulders whose ramp
// spans the (1 - overlap)/2 and (1 + overlap)/2 sample quantiles.
inline double two_way_split_rmse(const Rows& x, const Vec& y, std::size_t var, double overlap, double threshold) {
  Vec col;
  for (const auto& row : x) col.push_back(row[var]);
  const double a = quantile7(col, 0.5 - overlap / 2.0);
  const double b = quantile7(col, 0.5 + overlap / 2.0);
  Rows wbar;
  for (const auto& row : x) {
    const double s = shoulder_small(row[var], a, b);
    const double g = shoulder_big(row[var], a, b);
    wbar.push_back({s / (s + g), g / (s + g)});
  }
  return tsk_refit_rmse(x, y, wbar, threshold);
}

// --- random data ----------------------------------------------------------

inline Vec uniform_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (auto& e : v) e = d(rng);
  return v;
}

inline Rows uniform_rows(std::mt19937_64& rng, std::size_t p, std::size_t m, double lo = -1.0, double hi = 1.0) {
  Rows r(p);
  for (auto& row : r) row = uniform_vec(rng, m, lo, hi);
  return r;
}

}  // namespace oracle
