#pragma once

// Open-loop path search over a timetable network: a fixed node path is chosen
// before departure and its arrival-time distribution is carried along as an
// ArrivalMixture.

#include <cstddef>
#include <functional>
#include <vector>

#include "tdsp/distributions.hpp"
#include "tdsp/network.hpp"
#include "tdsp/utility.hpp"

namespace tdsp {

struct PathLabel {
  std::vector<NodeId> path;   // origin first
  std::vector<EdgeId> edges;  // edges[k] joins path[k] -> path[k + 1]
  ArrivalMixture cost;        // arrival distribution at path.back()
  double priority = 0.0;      // expected utility of `cost`

  NodeId node() const { return path.back(); }
};

struct SearchStats {
  std::size_t generated = 0;  // labels pushed, including the origin label
  std::size_t expanded = 0;   // labels popped and accepted into the closed list
  std::size_t pruned = 0;     // labels popped and discarded
  std::size_t remaining = 0;  // labels still queued at termination
  std::size_t peak_queue = 0;
};

struct SearchResult {
  PathLabel best;
  /// Undominated labels that reached a terminal node, best first.
  std::vector<PathLabel> admissible;
  SearchStats stats;
};

/// Arrival distribution after traversing `edge` from a node reached with
/// distribution `cost`. On a bus edge the traveller boards the first bus
/// departing at or after arrival, so bus j receives weight
/// Pr(d_{j-1} < X <= d_j) and the walk receives Pr(X > d_last). A fixed edge
/// shifts the distribution.
ArrivalMixture extend_cost(const ArrivalMixture& cost, const Edge& edge);

PathLabel origin_label(NodeId origin, Time t0, const Utility& u);

/// Appends edge `e` to `label`. Throws Error(InvalidEdge) when the edge does
/// not leave the label's node.
PathLabel extend(const PathLabel& label, const Network& net, EdgeId e, const Utility& u);

/// Ordering used by the priority queue: higher priority first, then shorter
/// paths, then the lexicographically smaller node sequence.
bool ranks_before(const PathLabel& a, const PathLabel& b);

enum class Pruning {
  Dominance,      // keep every label not stochastically dominated at its node
  ExpectedValue,  // keep only the single best-priority label per node
  None,           // keep everything
};

enum class Termination {
  BestFirst,   // stop once the queue top is worse than the best terminal label
  Exhaustive,  // run until the queue is empty
};

struct SearchOptions {
  Pruning pruning = Pruning::Dominance;
  Termination termination = Termination::BestFirst;
  /// Throws Error(LabelCapExceeded) once more labels than this are generated.
  /// Zero means no cap.
  std::size_t label_cap = 0;
};

/// Returns the utility that scores arrival at `node` if the node ends a
/// search, or nullptr if search continues through it.
using TerminalUtility = std::function<const Utility*(NodeId node)>;

/// Priority-first search from `start` at `origin`. Labels at terminal nodes are
/// scored with their terminal utility and never expanded; all other labels are
/// prioritised by `u`. Every terminal utility must be bounded above by `u` for
/// best-first termination to be exact.
///
/// Throws Error(InconsistentNetwork), Error(MissingNode) or
/// Error(UnreachableDestination).
SearchResult priority_first_search(const Network& net, NodeId origin, const ArrivalMixture& start,
                                   const Utility& u, const TerminalUtility& terminal,
                                   const SearchOptions& options);

/// PFS-Dominance: best-first search that prunes labels whose arrival
/// distribution is stochastically dominated by another label at the same
/// node. Optimal for nonincreasing u on a consistent network.
SearchResult pfs_dominance(const Network& net, NodeId origin, Time t0, NodeId dest,
                           const Utility& u,
                           Termination termination = Termination::BestFirst);

/// Classic shortest-path pruning: one label per node, compared by priority.
/// No optimality guarantee under time-dependent uncertainty.
SearchResult expected_value_search(const Network& net, NodeId origin, Time t0, NodeId dest,
                                   const Utility& u);

/// Best-first search without any pruning. `label_cap` bounds memory.
SearchResult unpruned_search(const Network& net, NodeId origin, Time t0, NodeId dest,
                             const Utility& u, std::size_t label_cap);

struct Enumeration {
  PathLabel best;
  std::vector<PathLabel> paths;
};

inline constexpr std::size_t kEnumerationLimit = 1'000'000;

/// Number of origin -> dest paths in an acyclic network, saturating at
/// `saturate_at`. Throws Error(CyclicNetwork).
std::size_t count_paths(const Network& net, NodeId origin, NodeId dest,
                        std::size_t saturate_at = kEnumerationLimit + 1);

/// Exhaustive oracle: folds extend_cost along every origin -> dest path.
/// Throws Error(CyclicNetwork), Error(TooManyPaths) above `limit`, or
/// Error(UnreachableDestination).
Enumeration enumerate_paths(const Network& net, NodeId origin, Time t0, NodeId dest,
                            const Utility& u, std::size_t limit = kEnumerationLimit);

}  // namespace tdsp
