#pragma once

// Closed-loop planning. A Policy maps every node and arrival time to the
// departure option with the highest expected utility; arrival times are
// partitioned at departure epochs so each interval has a constant value.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdsp/network.hpp"
#include "tdsp/open_loop.hpp"
#include "tdsp/utility.hpp"

namespace tdsp {

inline constexpr Time kInfinity = std::numeric_limits<Time>::infinity();

enum class ChoiceKind {
  Terminal,  // the destination: stop and collect u(t)
  Bus,       // board `bus` on bus edge `edge`
  Walk,      // take the walking fallback of bus edge `edge`
  Fixed,     // traverse fixed-duration edge `edge`
  Stranded,  // no outgoing edge; value 0
};

struct Choice {
  ChoiceKind kind = ChoiceKind::Stranded;
  EdgeId edge = 0;      // unused for Terminal and Stranded
  std::size_t bus = 0;  // only for Bus
  NodeId to = 0;        // successor node, unused for Terminal and Stranded

  bool operator==(const Choice&) const = default;
};

/// Arrival times in (start, end] share `choice` and `value`. The first
/// interval of a node starts at -inf and the last one ends at +inf.
struct IntervalChoice {
  Time start = -kInfinity;
  Time end = kInfinity;
  Choice choice;
  double value = 0.0;

  bool contains(Time t) const { return start < t && t <= end; }
};

class Policy {
 public:
  Policy(std::size_t node_count, NodeId dest, Utility u);

  NodeId dest() const noexcept { return dest_; }
  const Utility& utility() const noexcept { return utility_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  bool has(NodeId node) const noexcept { return node < nodes_.size() && !nodes_[node].empty(); }
  /// Throws Error(MissingNode) when the node has no policy.
  const std::vector<IntervalChoice>& intervals(NodeId node) const;
  const IntervalChoice& at(NodeId node, Time t) const;

  /// The node's value function as a step utility, equal values merged.
  Utility value_function(NodeId node) const;

  void set(NodeId node, std::vector<IntervalChoice> intervals);

 private:
  NodeId dest_;
  Utility utility_;
  std::vector<std::vector<IntervalChoice>> nodes_;
};

/// Backward induction over an acyclic, consistent network. Every node gets a
/// policy covering (-inf, inf). Nodes with no outgoing edges other than the
/// destination are stranded with value 0.
///
/// Throws Error(UnsupportedUtility) for a linear utility, Error(CyclicNetwork),
/// Error(InconsistentNetwork) or Error(MissingNode).
Policy adaptive_path(const Network& net, NodeId dest, const Utility& u);

/// Value of the interval containing t. Throws Error(MissingNode).
double evaluate_policy(const Policy& policy, NodeId node, Time t);

std::string to_string(ChoiceKind kind);

/// {"dest", "utility", "nodes": {name: [{start, end, choice, value}]}} with
/// unbounded ends written as null.
nlohmann::json policy_to_json(const Policy& policy, const Network& net);

/// Open-loop segment chosen at an adaptive node for arrivals in (start, end].
struct SegmentChoice {
  Time start = -kInfinity;
  Time end = kInfinity;
  std::vector<NodeId> path;  // empty at the destination
  std::vector<EdgeId> edges;
  double value = 0.0;

  bool contains(Time t) const { return start < t && t <= end; }
};

struct HybridPlan {
  /// Decision tables for the adaptive nodes and the destination, by node id;
  /// empty for open-loop nodes.
  std::vector<std::vector<SegmentChoice>> decisions;
  /// Segment followed from the origin to the first decision point.
  PathLabel first_segment;
  double expected_utility = 0.0;
};

/// Open-loop search between decision points, adaptive choice at the nodes in
/// `adaptive_nodes`. Each adaptive node's value function is built backward
/// from the destination and acts as the terminal utility of the segment
/// searches that reach it.
///
/// Throws as adaptive_path, plus Error(UnreachableDestination).
HybridPlan hybrid_plan(const Network& net, const std::vector<NodeId>& adaptive_nodes,
                       NodeId origin, Time t0, NodeId dest, const Utility& u);

}  // namespace tdsp
