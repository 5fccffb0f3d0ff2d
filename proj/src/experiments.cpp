#include "tdsp/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "tdsp/adaptive.hpp"
#include "tdsp/errors.hpp"
#include "tdsp/open_loop.hpp"

namespace tdsp {

Time parse_clock(std::string_view text) {
  const auto colon = text.find(':');
  int hh = -1;
  int mm = -1;
  auto parse = [](std::string_view s, int& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  if (colon == std::string_view::npos || !parse(text.substr(0, colon), hh) ||
      !parse(text.substr(colon + 1), mm) || hh < 0 || hh > 23 || mm < 0 || mm > 59 ||
      text.size() - colon - 1 != 2) {
    throw Error(ErrorKind::InvalidInput, "expected a clock time hh:mm, got '" + std::string(text) + "'");
  }
  return 60.0 * hh + mm;
}

std::string format_clock(Time minutes) {
  const auto total = static_cast<long>(std::lround(minutes));
  std::ostringstream os;
  os << total / 60 << ':' << (total % 60 < 10 ? "0" : "") << total % 60;
  return os.str();
}

std::string to_string(Option option) { return option == Option::Bus ? "bus" : "taxi"; }

ScenarioResult windsor_scenario(Time train_departure) {
  const Time taxi_lo = kNoon + 70;   // 13:10
  const Time taxi_hi = kNoon + 120;  // 14:00
  const Time bus_at = kNoon + 90;    // 13:30
  const double taxi = std::clamp((train_departure - taxi_lo) / (taxi_hi - taxi_lo), 0.0, 1.0);
  const double bus = train_departure >= bus_at ? 1.0 : 0.0;
  return {train_departure, taxi, bus, taxi > bus ? Option::Taxi : Option::Bus};
}

std::uint64_t grid_path_count(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "grid size must be at least 1");
  // binomial(2k, k) with k = n - 1, built so every partial product is an integer.
  const auto k = static_cast<std::uint64_t>(n - 1);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (k + i) / i;
  return c;
}

SweepResult run_grid_sweep(const SweepOptions& options) {
  SweepResult result;
  for (int n : options.sizes) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "sweep sizes must be at least 2");
  }
  for (int n : options.sizes) {
    for (std::uint64_t seed : options.seeds) {
      SweepRow row;
      row.n = n;
      row.seed = seed;
      row.baseline = grid_path_count(n);
      GridSpec spec = options.base;
      spec.n = n;
      spec.seed = seed;
      try {
        const auto net = generate_grid(spec);
        const NodeId dest = net.node_count() - 1;
        const auto u = Utility::deadline(options.deadline_factor * expected_traversal_time(spec));
        const auto start = std::chrono::steady_clock::now();
        const auto found = pfs_dominance(net, 0, 0.0, dest, u);
        const auto stop = std::chrono::steady_clock::now();
        row.generated = found.stats.generated;
        row.expanded = found.stats.expanded;
        if (options.record_timing) {
          row.ms = std::chrono::duration<double, std::milli>(stop - start).count();
        }
        if (options.run_unpruned && n <= options.unpruned_max_n) {
          row.unpruned_ran = true;
          try {
            row.unpruned_generated =
                unpruned_search(net, 0, 0.0, dest, u, options.label_cap).stats.generated;
          } catch (const Error& e) {
            row.unpruned_error = e.what();
          }
        }
      } catch (const Error& e) {
        row.error = e.what();
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "n,seed,generated,expanded,baseline,ms\n";
  for (const auto& r : result.rows) {
    out << r.n << ',' << r.seed << ',';
    if (r.error.empty()) {
      out << r.generated << ',' << r.expanded;
    } else {
      out << ',';
    }
    out << ',' << r.baseline << ',' << format_number(r.ms) << '\n';
  }
}

namespace {

double adaptive_value(const Network& net, NodeId origin, Time t0, NodeId dest, Time deadline) {
  return evaluate_policy(adaptive_path(net, dest, Utility::deadline(deadline)), origin, t0);
}

/// Smallest t (to bisection precision) with pred(t) true, for pred monotone
/// false -> true; `lo` must be false and `hi` true.
Time bisect(Time lo, Time hi, const std::function<bool(Time)>& pred) {
  for (int i = 0; i < 200 && hi - lo > 1e-9 * std::max(1.0, std::abs(hi)); ++i) {
    const Time mid = lo + 0.5 * (hi - lo);
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

Time find_true(Time start, const std::function<bool(Time)>& pred) {
  Time width = 64.0;
  for (int i = 0; i < 60; ++i) {
    if (pred(start + width)) return start + width;
    width *= 2;
  }
  throw Error(ErrorKind::UnreachableDestination, "curve never reaches the calibration level");
}

}  // namespace

CurveResult run_deadline_curve(const Network& net, NodeId origin, Time t0, NodeId dest,
                               const std::vector<Time>& deadlines) {
  const auto linear = Utility::linear();
  const auto shared = pfs_dominance(net, origin, t0, dest, linear, Termination::Exhaustive);
  const auto ev = expected_value_search(net, origin, t0, dest, linear);

  CurveResult result;
  for (Time deadline : deadlines) {
    const auto u = Utility::deadline(deadline);
    double dominance = 0.0;
    for (const auto& label : shared.admissible) {
      dominance = std::max(dominance, expected_utility(label.cost, u));
    }
    result.rows.push_back({deadline, adaptive_value(net, origin, t0, dest, deadline), dominance,
                           expected_utility(ev.best.cost, u)});
  }
  return result;
}

void write_curve_csv(const CurveResult& result, std::ostream& out) {
  out << "deadline,adaptive,dominance,expected_value\n";
  for (const auto& r : result.rows) {
    out << format_number(r.deadline) << ',' << format_number(r.adaptive) << ','
        << format_number(r.dominance) << ',' << format_number(r.expected_value) << '\n';
  }
}

std::vector<Time> DeadlineRange::deadlines() const {
  std::vector<Time> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(first + step * static_cast<double>(k));
  return out;
}

GridSpec curve_grid_spec(std::uint64_t seed) {
  GridSpec spec;
  spec.n = 10;
  spec.trip = {3.0, 9.0};
  spec.delay = {1.0, 4.0};
  spec.headway = {5.0, 15.0};
  spec.horizon = 400.0;
  spec.seed = seed;
  return spec;
}

DeadlineRange calibrate_deadlines(const Network& net, NodeId origin, Time t0, NodeId dest,
                                  const CalibrationOptions& options) {
  const std::size_t count = options.count;
  const Time step = options.step;
  const double low = options.low;
  const double high = options.high;
  if (count < 2 || !(step > 0) || !(low < high)) {
    throw Error(ErrorKind::InvalidInput, "calibration needs count >= 2, step > 0 and low < high");
  }
  const auto ev = expected_value_search(net, origin, t0, dest, Utility::linear());
  auto adaptive_above = [&](Time t) { return adaptive_value(net, origin, t0, dest, t) > low; };
  auto ev_reaches = [&](Time t) { return cdf(ev.best.cost, t) >= high; };

  DeadlineRange range;
  range.count = count;
  // Nothing arrives before t0, so the adaptive value there is 0.
  const Time a_hi = find_true(t0, adaptive_above);
  const Time lo_edge = bisect(t0, a_hi, adaptive_above);
  // bisect returns the first "above" point; step back to the last "at most".
  range.low_edge = std::nextafter(lo_edge, -kInfinity);
  while (adaptive_above(range.low_edge)) range.low_edge -= 1e-6 * std::max(1.0, std::abs(lo_edge));
  range.high_edge = bisect(t0, find_true(t0, ev_reaches), ev_reaches);

  const Time span = static_cast<double>(count - 1) * step;
  const Time spread = range.high_edge - range.low_edge;
  if (spread <= span) {
    // Any first deadline in [high_edge - span, low_edge] works; prefer a whole
    // minute near the middle of that window.
    const Time a = range.high_edge - span;
    const Time b = range.low_edge;
    const Time whole = std::round(0.5 * (a + b));
    if (options.preferred_first && *options.preferred_first >= a && *options.preferred_first <= b) {
      range.first = *options.preferred_first;
    } else {
      range.first = (whole >= a && whole <= b) ? whole : 0.5 * (a + b);
    }
    range.step = step;
  } else {
    range.first = range.low_edge;
    range.step = spread / static_cast<double>(count - 1) * (1 + 1e-12);
  }
  return range;
}

}  // namespace tdsp
