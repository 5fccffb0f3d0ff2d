#pragma once

#include <cstdint>
#include <string>

#include "tdsp/network.hpp"

namespace tdsp {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Random n x n bus grid. Every edge draws (m, lambda, f) uniformly from the
/// ranges; its buses leave at 0, f, 2f, ... up to `horizon` and the bus
/// leaving at d arrives as EXP[d + m, lambda]. The walking fallback is
/// EXP[last departure + m + walk_offset, walk_delay_factor * lambda].
struct GridSpec {
  int n = 10;
  Range trip{5.0, 15.0};    // m, minimum trip time
  Range delay{2.0, 10.0};   // lambda, mean excess delay
  Range headway{10.0, 40.0};// f, departure frequency
  Time horizon = 400.0;     // last scheduled departure is at or before this
  double walk_offset = 60.0;
  double walk_delay_factor = 2.0;
  std::uint64_t seed = 1;
};

/// Node name for grid cell (row, col); row 0 is the bottom, col 0 the left.
std::string grid_node_name(int row, int col);

/// Lattice with rightward and upward edges only. Throws Error(InvalidSpec)
/// unless n >= 1 and every range and the horizon are positive.
Network generate_grid(const GridSpec& spec);

/// Expected time to cross the grid along any monotone path using mid-range
/// parameters: (2n - 2) * (m + lambda + f / 2).
Time expected_traversal_time(const GridSpec& spec);

}  // namespace tdsp
