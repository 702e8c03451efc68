#include "tskfit/membership.hpp"

#include <cmath>
#include <numeric>

#include "tskfit/error.hpp"

namespace tskfit {

const char* to_string(MembershipKind kind) noexcept {
  switch (kind) {
    case MembershipKind::S: return "S";
    case MembershipKind::M: return "M";
    case MembershipKind::B: return "B";
  }
  return "?";
}

MembershipKind membership_kind_from_string(const std::string& text) {
  if (text == "S") return MembershipKind::S;
  if (text == "M") return MembershipKind::M;
  if (text == "B") return MembershipKind::B;
  throw Error(ErrorKind::InvalidArgument, "unknown membership kind '" + text + "' (expected S, M or B)");
}

std::size_t expected_param_count(MembershipKind kind) noexcept {
  return kind == MembershipKind::M ? 4 : 2;
}

MembershipFunction::MembershipFunction(MembershipKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
  if (params_.size() != expected_param_count(kind_)) {
    throw Error(ErrorKind::InvalidArgument, std::string("membership ") + to_string(kind_) + " needs " +
                                                std::to_string(expected_param_count(kind_)) + " breakpoints, got " +
                                                std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!std::isfinite(params_[i])) throw Error(ErrorKind::NonFinite, "membership breakpoint is not finite");
    if (i > 0 && !(params_[i - 1] < params_[i])) {
      throw Error(ErrorKind::InvalidArgument, "membership breakpoints must be strictly increasing");
    }
  }
}

double MembershipFunction::operator()(double x) const {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "membership argument is not finite");
  const auto& p = params_;
  switch (kind_) {
    case MembershipKind::S:
      if (x <= p[0]) return 1.0;
      if (x >= p[1]) return 0.0;
      return (p[1] - x) / (p[1] - p[0]);
    case MembershipKind::B:
      if (x <= p[0]) return 0.0;
      if (x >= p[1]) return 1.0;
      return (x - p[0]) / (p[1] - p[0]);
    case MembershipKind::M:
      if (x <= p[0] || x >= p[3]) return 0.0;
      if (x < p[1]) return (x - p[0]) / (p[1] - p[0]);
      if (x <= p[2]) return 1.0;
      return (p[3] - x) / (p[3] - p[2]);
  }
  return 0.0;
}

double MembershipFunction::midpoint() const noexcept {
  return std::accumulate(params_.begin(), params_.end(), 0.0) / static_cast<double>(params_.size());
}

double membership_eval(const MembershipFunction& mf, double x) { return mf(x); }

}  // namespace tskfit
