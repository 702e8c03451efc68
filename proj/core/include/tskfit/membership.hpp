#pragma once

#include <span>
#include <string>
#include <vector>

namespace tskfit {

// S = small (left shoulder), M = medium (trapezoid), B = big (right shoulder).
enum class MembershipKind { S, M, B };

const char* to_string(MembershipKind kind) noexcept;
MembershipKind membership_kind_from_string(const std::string& text);

// Piecewise-linear fuzzy set on one scalar variable.
//
//   S[a,b]      1 for x <= a, falls linearly to 0 at b, 0 beyond.
//   B[a,b]      0 for x <= a, rises linearly to 1 at b, 1 beyond.
//   M[a,b,c,d]  0 outside [a,d], rises on [a,b], plateau 1 on [b,c], falls on [c,d].
//
// Breakpoints must be finite and strictly increasing.
class MembershipFunction {
 public:
  MembershipFunction(MembershipKind kind, std::vector<double> params);

  static MembershipFunction small(double a, double b) { return {MembershipKind::S, {a, b}}; }
  static MembershipFunction big(double a, double b) { return {MembershipKind::B, {a, b}}; }
  static MembershipFunction medium(double a, double b, double c, double d) {
    return {MembershipKind::M, {a, b, c, d}};
  }

  MembershipKind kind() const noexcept { return kind_; }
  std::span<const double> params() const noexcept { return params_; }

  // Degree of membership in [0, 1]. Throws NonFinite for NaN/inf input.
  double operator()(double x) const;

  // Mean of the breakpoints, used as the set's representative location.
  double midpoint() const noexcept;

  friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;

 private:
  MembershipKind kind_;
  std::vector<double> params_;
};

double membership_eval(const MembershipFunction& mf, double x);

std::size_t expected_param_count(MembershipKind kind) noexcept;

}  // namespace tskfit
