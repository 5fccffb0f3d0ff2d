#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdsp/distributions.hpp"

namespace tdsp {

/// A nonincreasing utility of arrival time.
///
/// Three shapes are supported, all evaluated in closed form against an
/// ArrivalMixture:
///   - deadline T: 1 for arrival at or before T, 0 after;
///   - linear: u(t) = -t;
///   - step: breakpoints b_0 < ... < b_{k-1} and values v_0 >= ... >= v_k with
///     u(t) = v_0 for t <= b_0, v_i for b_{i-1} < t <= b_i, v_k for t > b_{k-1}.
/// A deadline is a step function with one breakpoint.
class Utility {
 public:
  enum class Kind { Deadline, Linear, Step };

  static Utility deadline(Time t);
  static Utility linear();
  /// Requires strictly increasing breakpoints, nonincreasing values and
  /// values.size() == breakpoints.size() + 1; throws Error(UnsupportedUtility) otherwise.
  static Utility step(std::vector<Time> breakpoints, std::vector<double> values);

  /// Parses "deadline:T", "linear" or "step:b0,b1,...:v0,v1,...".
  /// Throws Error(UnsupportedUtility) for any other shape.
  static Utility parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  bool is_step_shaped() const noexcept { return kind_ != Kind::Linear; }

  /// Deadline time; only meaningful for Kind::Deadline.
  Time deadline_time() const noexcept { return breakpoints_.empty() ? 0.0 : breakpoints_.front(); }
  std::span<const Time> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }

  double operator()(Time t) const;

  std::string describe() const;

 private:
  Utility(Kind kind, std::vector<Time> breakpoints, std::vector<double> values)
      : kind_(kind), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {}

  Kind kind_;
  std::vector<Time> breakpoints_;
  std::vector<double> values_;
};

/// E[u(X)] for X distributed as `c`. For a deadline this is exactly cdf(c, T).
double expected_utility(const ArrivalMixture& c, const Utility& u);

}  // namespace tdsp
