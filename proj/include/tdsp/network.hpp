#pragma once

// Timetable network: directed edges that are either a schedule of buses with
// a walking fallback, or a fixed-duration link.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tdsp/distributions.hpp"

namespace tdsp {

using NodeId = std::size_t;
using EdgeId = std::size_t;

/// A scheduled departure: leaves at `departure`, arrives as EXP[earliest, delay].
/// Stored as plain numbers so malformed schedules can be loaded and reported.
struct Bus {
  Time departure = 0.0;
  Time earliest = 0.0;
  double delay = 1.0;

  ShiftedExponential arrival() const { return {earliest, delay}; }

  friend bool operator==(const Bus&, const Bus&) = default;
};

/// Absolute-time arrival distribution when every bus on the edge is missed.
struct Walk {
  Time earliest = 0.0;
  double delay = 1.0;

  ShiftedExponential arrival() const { return {earliest, delay}; }

  friend bool operator==(const Walk&, const Walk&) = default;
};

struct BusService {
  std::vector<Bus> buses;  // departure strictly increasing
  Walk walk;

  friend bool operator==(const BusService&, const BusService&) = default;
};

struct FixedDuration {
  Time duration = 0.0;

  friend bool operator==(const FixedDuration&, const FixedDuration&) = default;
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  std::variant<BusService, FixedDuration> service;

  bool is_bus() const noexcept { return std::holds_alternative<BusService>(service); }
  const BusService& buses() const { return std::get<BusService>(service); }
  Time duration() const { return std::get<FixedDuration>(service).duration; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Violation {
  enum class Condition {
    DepartureOrder,         // departures not strictly increasing
    EarliestArrivalOrder,   // later bus has smaller M
    DelayOrder,             // later bus has smaller lambda
    ArrivesBeforeDeparture, // d > M
    NonPositiveDelay,       // lambda <= 0 on a bus or the walk
    WalkNotDominated,       // some bus fails to dominate the walk
    NegativeDuration,       // fixed edge with duration < 0
  };

  EdgeId edge = 0;
  Condition condition = Condition::DepartureOrder;
  /// Offending bus indices within the edge's schedule. `second` is empty for
  /// single-bus conditions; for WalkNotDominated `first` is the bus.
  std::optional<std::size_t> first;
  std::optional<std::size_t> second;
  std::string message;
};

std::string_view to_string(Violation::Condition c) noexcept;

struct ValidationReport {
  std::vector<Violation> violations;

  bool consistent() const noexcept { return violations.empty(); }
};

class Network;

/// Checks the per-edge schedule conditions that make the network
/// stochastically consistent. Later buses never dominate earlier ones, and
/// every bus dominates the walking fallback. Each broken condition is one
/// Violation.
ValidationReport validate_consistency(const Network& net);

class Network {
 public:
  Network() = default;
  /// Throws Error(InvalidInput) for duplicate node names or edges whose
  /// endpoints are out of range. Consistency violations are recorded, not thrown.
  Network(std::vector<std::string> node_names, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::string& name(NodeId id) const { return names_.at(id); }
  std::span<const std::string> names() const noexcept { return names_; }
  std::optional<NodeId> find(std::string_view name) const;
  /// Throws Error(MissingNode) for an unknown name.
  NodeId id(std::string_view name) const;

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const EdgeId> outgoing(NodeId n) const { return outgoing_.at(n); }

  bool acyclic() const noexcept { return acyclic_; }
  /// Topological order of all nodes; empty when the network has a cycle.
  std::span<const NodeId> topological_order() const noexcept { return topo_; }

  const ValidationReport& validation() const noexcept { return report_; }
  bool consistent() const noexcept { return report_.consistent(); }

  friend bool operator==(const Network& a, const Network& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::vector<EdgeId>> outgoing_;
  std::vector<NodeId> topo_;
  bool acyclic_ = true;
  ValidationReport report_;
};

}  // namespace tdsp
