#include "tdsp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tdsp/errors.hpp"

namespace tdsp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ShiftedExponential::ShiftedExponential(Time earliest, double mean_delay)
    : earliest_(earliest), mean_delay_(mean_delay) {
  if (!std::isfinite(earliest) || !std::isfinite(mean_delay) || !(mean_delay > 0.0)) {
    std::ostringstream os;
    os << "shifted exponential needs finite M and lambda > 0 (got M=" << earliest
       << ", lambda=" << mean_delay << ")";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
}

double cdf(const Distribution& d, Time t) {
  return std::visit(overloaded{
                        [t](const PointMass& p) { return t >= p.t ? 1.0 : 0.0; },
                        [t](const ShiftedExponential& e) {
                          if (t <= e.earliest()) return 0.0;
                          return -std::expm1(-(t - e.earliest()) / e.mean_delay());
                        },
                    },
                    d);
}

double survival(const Distribution& d, Time t) {
  return std::visit(overloaded{
                        [t](const PointMass& p) { return t >= p.t ? 0.0 : 1.0; },
                        [t](const ShiftedExponential& e) {
                          if (t <= e.earliest()) return 1.0;
                          return std::exp(-(t - e.earliest()) / e.mean_delay());
                        },
                    },
                    d);
}

Time mean(const Distribution& d) {
  return std::visit(overloaded{
                        [](const PointMass& p) { return p.t; },
                        [](const ShiftedExponential& e) { return e.earliest() + e.mean_delay(); },
                    },
                    d);
}

Time support_start(const Distribution& d) {
  return std::visit(overloaded{
                        [](const PointMass& p) { return p.t; },
                        [](const ShiftedExponential& e) { return e.earliest(); },
                    },
                    d);
}

Distribution shifted(const Distribution& d, Time delta) {
  return std::visit(overloaded{
                        [delta](const PointMass& p) -> Distribution { return PointMass{p.t + delta}; },
                        [delta](const ShiftedExponential& e) -> Distribution {
                          return ShiftedExponential(e.earliest() + delta, e.mean_delay());
                        },
                    },
                    d);
}

bool dominates(const Distribution& a, const Distribution& b) {
  return std::visit(
      overloaded{
          [](const PointMass& x, const PointMass& y) { return x.t <= y.t; },
          [](const PointMass& x, const ShiftedExponential& y) { return x.t <= y.earliest(); },
          // An exponential CDF never reaches one, so it cannot dominate a step.
          [](const ShiftedExponential&, const PointMass&) { return false; },
          [](const ShiftedExponential& x, const ShiftedExponential& y) {
            return x.earliest() <= y.earliest() && x.mean_delay() <= y.mean_delay();
          },
      },
      a, b);
}

ArrivalMixture::ArrivalMixture(std::vector<ArrivalComponent> components) {
  if (components.empty()) {
    throw Error(ErrorKind::InvalidInput, "arrival mixture needs at least one component");
  }
  double total = 0.0;
  for (const auto& c : components) {
    if (!std::isfinite(c.weight) || c.weight < 0.0 || c.weight > 1.0 + kWeightSumTolerance) {
      std::ostringstream os;
      os << "component weight " << c.weight << " outside [0, 1]";
      throw Error(ErrorKind::InvalidInput, os.str());
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "mixture weights sum to " << total << ", expected 1";
    throw Error(ErrorKind::InvalidInput, os.str());
  }

  components_.reserve(components.size());
  double kept = 0.0;
  bool dropped = false;
  for (auto& c : components) {
    if (c.weight < kDropTolerance) {
      dropped = dropped || c.weight > 0.0;
      continue;
    }
    kept += c.weight;
    if (!components_.empty() && components_.back().dist == c.dist) {
      components_.back().weight += c.weight;
    } else {
      components_.push_back(std::move(c));
    }
  }
  if (components_.empty()) {
    throw Error(ErrorKind::InvalidInput, "every mixture component is below the drop tolerance");
  }
  if (dropped) {
    for (auto& c : components_) c.weight /= kept;
  }
  for (std::size_t k = 1; k < components_.size(); ++k) {
    if (!dominates(components_[k - 1].dist, components_[k].dist)) {
      ordered_ = false;
      break;
    }
  }
}

ArrivalMixture ArrivalMixture::point(Time t) { return single(PointMass{t}); }

ArrivalMixture ArrivalMixture::single(const Distribution& d) {
  return ArrivalMixture({ArrivalComponent{1.0, d}});
}

double cdf(const ArrivalMixture& c, Time t) {
  double p = 0.0;
  for (const auto& comp : c.components()) p += comp.weight * cdf(comp.dist, t);
  return std::clamp(p, 0.0, 1.0);
}

double survival(const ArrivalMixture& c, Time t) {
  double p = 0.0;
  for (const auto& comp : c.components()) p += comp.weight * survival(comp.dist, t);
  return std::clamp(p, 0.0, 1.0);
}

Time mean(const ArrivalMixture& c) {
  double m = 0.0;
  for (const auto& comp : c.components()) m += comp.weight * mean(comp.dist);
  return m;
}

Time support_start(const ArrivalMixture& c) {
  Time start = support_start(c.components().front().dist);
  for (const auto& comp : c.components()) start = std::min(start, support_start(comp.dist));
  return start;
}

bool dominates(const ArrivalMixture& c1, const ArrivalMixture& c2) {
  if (!c1.dominance_ordered() || !c2.dominance_ordered()) {
    throw Error(ErrorKind::InvalidInput,
                "mixture dominance needs both mixtures in dominance order");
  }
  const auto a = c1.components();
  const auto b = c2.components();
  // Cumulative end of the slice owned by component k; the last one always
  // closes at exactly 1.
  auto slice_end = [](std::span<const ArrivalComponent> cs, std::size_t k, double prev) {
    return k + 1 == cs.size() ? 1.0 : std::min(prev + cs[k].weight, 1.0);
  };

  std::size_t i = 0;
  std::size_t j = 0;
  double lo = 0.0;
  double end_a = slice_end(a, 0, 0.0);
  double end_b = slice_end(b, 0, 0.0);
  for (;;) {
    const double hi = std::min(end_a, end_b);
    if (hi - lo > kSliceTolerance && !dominates(a[i].dist, b[j].dist)) return false;
    const bool last_a = i + 1 == a.size();
    const bool last_b = j + 1 == b.size();
    if (last_a && last_b) return true;
    lo = hi;
    if (end_a <= hi && !last_a) {
      ++i;
      end_a = slice_end(a, i, end_a);
    }
    if (end_b <= hi && !last_b) {
      ++j;
      end_b = slice_end(b, j, end_b);
    }
  }
}

ArrivalMixture shift(const ArrivalMixture& c, Time delta) {
  if (!std::isfinite(delta) || delta < 0.0) {
    std::ostringstream os;
    os << "shift needs a finite non-negative delta (got " << delta << ")";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  std::vector<ArrivalComponent> out;
  out.reserve(c.size());
  for (const auto& comp : c.components()) out.push_back({comp.weight, shifted(comp.dist, delta)});
  return ArrivalMixture(std::move(out));
}

}  // namespace tdsp
