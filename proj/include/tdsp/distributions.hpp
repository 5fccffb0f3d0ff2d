#pragma once

// Arrival-time distributions. Finite mixtures of shifted exponentials and point
// masses describe the arrival time of an open-loop path.
//
// Times are minutes on one absolute axis. All types are immutable values.

#include <span>
#include <variant>
#include <vector>

namespace tdsp {

using Time = double;

/// Components lighter than this are dropped when a mixture is built.
inline constexpr double kDropTolerance = 1e-12;
/// Allowed deviation of a mixture's total weight from one.
inline constexpr double kWeightSumTolerance = 1e-9;
/// Probability slices narrower than this are ignored by the mixture dominance
/// test. Renormalisation after dropping can move cumulative thresholds by a
/// few drop tolerances, which must not be read as an ordering reversal.
inline constexpr double kSliceTolerance = 1e-10;

/// Deterministic arrival at `t`.
struct PointMass {
  Time t = 0.0;

  friend bool operator==(const PointMass&, const PointMass&) = default;
};

/// EXP[M, lambda]: arrival no earlier than M, exponential excess delay with
/// mean lambda. Pr(x <= t) = 1 - exp(-(t - M) / lambda) for t > M.
class ShiftedExponential {
 public:
  /// Throws Error(InvalidInput) unless `mean_delay` > 0 and both are finite.
  ShiftedExponential(Time earliest, double mean_delay);

  Time earliest() const noexcept { return earliest_; }
  double mean_delay() const noexcept { return mean_delay_; }

  friend bool operator==(const ShiftedExponential&, const ShiftedExponential&) = default;

 private:
  Time earliest_;
  double mean_delay_;
};

using Distribution = std::variant<PointMass, ShiftedExponential>;

double cdf(const Distribution& d, Time t);
/// 1 - cdf, evaluated without cancellation in the exponential tail.
double survival(const Distribution& d, Time t);
Time mean(const Distribution& d);
/// Earliest time with positive probability of arrival.
Time support_start(const Distribution& d);
Distribution shifted(const Distribution& d, Time delta);

/// First-order stochastic dominance: cdf(a, t) >= cdf(b, t) for every t.
bool dominates(const Distribution& a, const Distribution& b);

struct ArrivalComponent {
  double weight = 0.0;
  Distribution dist = PointMass{};

  friend bool operator==(const ArrivalComponent&, const ArrivalComponent&) = default;
};

/// A finite probability-weighted list of arrival distributions. When produced
/// by path extension the list is in dominance order (each component dominates
/// every later one) and ends with the walking remainder, if any.
///
/// Construction drops components below kDropTolerance, merges adjacent
/// components with identical distributions and renormalises. The weights must
/// already sum to one within kWeightSumTolerance.
class ArrivalMixture {
 public:
  /// Throws Error(InvalidInput) for negative or non-finite weights, an empty
  /// list, or a weight sum away from one.
  explicit ArrivalMixture(std::vector<ArrivalComponent> components);

  static ArrivalMixture point(Time t);
  static ArrivalMixture single(const Distribution& d);

  std::span<const ArrivalComponent> components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }

  /// True when every component dominates its successor.
  bool dominance_ordered() const noexcept { return ordered_; }

  friend bool operator==(const ArrivalMixture& a, const ArrivalMixture& b) {
    return a.components_ == b.components_;
  }

 private:
  std::vector<ArrivalComponent> components_;
  bool ordered_ = true;
};

double cdf(const ArrivalMixture& c, Time t);
double survival(const ArrivalMixture& c, Time t);
Time mean(const ArrivalMixture& c);
Time support_start(const ArrivalMixture& c);

/// Slice-wise dominance on the cumulative-probability axis: at every slice
/// induced by the union of both mixtures' cumulative weights, the active
/// component of `c1` must dominate the active component of `c2`. A true result
/// implies cdf(c1, t) >= cdf(c2, t) for all t.
///
/// Throws Error(InvalidInput) when either mixture is not dominance ordered.
bool dominates(const ArrivalMixture& c1, const ArrivalMixture& c2);

/// Translates every component by `delta` minutes. Throws for delta < 0.
ArrivalMixture shift(const ArrivalMixture& c, Time delta);

}  // namespace tdsp
