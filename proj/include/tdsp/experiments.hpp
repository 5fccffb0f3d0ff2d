#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tdsp/grid.hpp"
#include "tdsp/network.hpp"

namespace tdsp {

// ---- Taxi-or-bus connection scenario ------------------------------------

/// Clock minutes since midnight; noon is 720.
inline constexpr Time kNoon = 720.0;

/// Parses "hh:mm" into clock minutes. Throws Error(InvalidInput).
Time parse_clock(std::string_view text);
std::string format_clock(Time minutes);

enum class Option { Bus, Taxi };
std::string to_string(Option option);

struct ScenarioResult {
  Time train_departure;
  double taxi_catch;
  double bus_catch;
  Option recommended;
};

/// Taxi arrival uniform on [13:10, 14:00], bus arrival exactly 13:30; each
/// option catches the train when it arrives no later than the departure.
/// Ties go to the bus.
ScenarioResult windsor_scenario(Time train_departure);

// ---- Label-count sweep ----------------------------------------------------

struct SweepOptions {
  std::vector<int> sizes;
  std::vector<std::uint64_t> seeds{1};
  GridSpec base;  // n and seed are overwritten per cell
  /// Deadline = factor * expected_traversal_time of each grid.
  double deadline_factor = 1.5;
  /// Also run the search without pruning for n <= unpruned_max_n.
  bool run_unpruned = false;
  int unpruned_max_n = 6;
  std::size_t label_cap = 1'000'000;
  /// When false the ms column is written as 0 so repeated runs match byte for byte.
  bool record_timing = true;
};

struct SweepRow {
  int n = 0;
  std::uint64_t seed = 0;
  std::size_t generated = 0;
  std::size_t expanded = 0;
  std::uint64_t baseline = 0;
  double ms = 0.0;
  std::string error;  // empty on success

  bool unpruned_ran = false;
  std::optional<std::size_t> unpruned_generated;  // empty when the cap was hit
  std::string unpruned_error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// binomial(2n - 2, n - 1): number of origin -> destination paths in an n x n grid.
std::uint64_t grid_path_count(int n);

SweepResult run_grid_sweep(const SweepOptions& options);

/// Header n,seed,generated,expanded,baseline,ms. Failed cells leave the
/// generated and expanded fields empty.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

// ---- Deadline curves -------------------------------------------------------

struct CurveRow {
  Time deadline;
  double adaptive;
  double dominance;
  double expected_value;
};

struct CurveResult {
  std::vector<CurveRow> rows;
};

/// One adaptive solve per deadline; one exhaustive dominance search whose
/// admissible set is rescored per deadline; one expected-value search under
/// a linear utility whose single path is rescored per deadline.
CurveResult run_deadline_curve(const Network& net, NodeId origin, Time t0, NodeId dest,
                               const std::vector<Time>& deadlines);

/// Header deadline,adaptive,dominance,expected_value.
void write_curve_csv(const CurveResult& result, std::ostream& out);

struct DeadlineRange {
  Time first = 0.0;
  Time step = 1.0;
  std::size_t count = 0;
  /// Deadlines where the adaptive value reaches `low` and the expected-value
  /// value reaches `high`.
  Time low_edge = 0.0;
  Time high_edge = 0.0;

  std::vector<Time> deadlines() const;
};

struct CalibrationOptions {
  std::size_t count = 101;
  Time step = 1.0;
  double low = 0.05;
  double high = 0.95;
  /// Kept as the first deadline when it satisfies both edges.
  std::optional<Time> preferred_first;
};

/// Places `count` deadlines `step` apart so the first has adaptive value at
/// most `low` and the last has expected-value value at least `high`. The step
/// is widened when the two edges are more than (count - 1) * step apart.
DeadlineRange calibrate_deadlines(const Network& net, NodeId origin, Time t0, NodeId dest,
                                  const CalibrationOptions& options = {});

/// Grid parameters for deadline curves on a 10 x 10 grid: shorter, steadier
/// trips and denser service than the generator defaults, so the interesting
/// deadlines for the lower-left to upper-right trip lie between 150 and 250.
GridSpec curve_grid_spec(std::uint64_t seed = 1);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double x);

}  // namespace tdsp
