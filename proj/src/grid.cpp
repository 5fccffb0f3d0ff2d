#include "tdsp/grid.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "tdsp/errors.hpp"

namespace tdsp {

namespace {

void check_range(const Range& r, const char* what) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo > 0.0) || r.lo > r.hi) {
    std::ostringstream os;
    os << "grid " << what << " range [" << r.lo << ", " << r.hi
       << "] must be positive and non-empty";
    throw Error(ErrorKind::InvalidSpec, os.str());
  }
}

double mid(const Range& r) { return 0.5 * (r.lo + r.hi); }

}  // namespace

std::string grid_node_name(int row, int col) {
  return std::to_string(row) + "," + std::to_string(col);
}

Network generate_grid(const GridSpec& spec) {
  if (spec.n < 1) throw Error(ErrorKind::InvalidSpec, "grid side length must be at least 1");
  check_range(spec.trip, "trip-time");
  check_range(spec.delay, "delay");
  check_range(spec.headway, "headway");
  if (!std::isfinite(spec.horizon) || !(spec.horizon > 0.0)) {
    throw Error(ErrorKind::InvalidSpec, "grid horizon must be positive");
  }
  if (!(spec.walk_offset >= 0.0) || !(spec.walk_delay_factor >= 1.0)) {
    throw Error(ErrorKind::InvalidSpec,
                "walk offset must be >= 0 and walk delay factor >= 1 for the walk to be dominated");
  }

  const int n = spec.n;
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) names.push_back(grid_node_name(r, c));
  }
  auto id = [n](int r, int c) { return static_cast<NodeId>(r * n + c); };

  std::mt19937_64 rng(spec.seed);
  auto draw = [&rng](const Range& r) {
    return r.lo == r.hi ? r.lo : std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
  };

  auto make_edge = [&](NodeId from, NodeId to) {
    const double m = draw(spec.trip);
    const double lambda = draw(spec.delay);
    const double f = draw(spec.headway);
    BusService service;
    for (long k = 0;; ++k) {
      const Time d = static_cast<double>(k) * f;
      if (d > spec.horizon) break;
      service.buses.push_back({d, d + m, lambda});
    }
    const Time last = service.buses.back().departure;
    service.walk = {last + m + spec.walk_offset, spec.walk_delay_factor * lambda};
    return Edge{from, to, std::move(service)};
  };

  std::vector<Edge> edges;
  edges.reserve(2 * static_cast<std::size_t>(n) * (n - 1));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c + 1 < n) edges.push_back(make_edge(id(r, c), id(r, c + 1)));
      if (r + 1 < n) edges.push_back(make_edge(id(r, c), id(r + 1, c)));
    }
  }
  return Network(std::move(names), std::move(edges));
}

Time expected_traversal_time(const GridSpec& spec) {
  return (2.0 * spec.n - 2.0) * (mid(spec.trip) + mid(spec.delay) + 0.5 * mid(spec.headway));
}

}  // namespace tdsp
