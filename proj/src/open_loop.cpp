#include "tdsp/open_loop.hpp"

#include <algorithm>
#include <memory>
#include <queue>
#include <sstream>

#include "tdsp/errors.hpp"

namespace tdsp {

ArrivalMixture extend_cost(const ArrivalMixture& cost, const Edge& edge) {
  if (!edge.is_bus()) return shift(cost, edge.duration());

  const auto& service = edge.buses();
  std::vector<ArrivalComponent> out;
  out.reserve(service.buses.size() + 1);
  // Survival differences rather than CDF differences keep late, small
  // weights accurate.
  double before = 1.0;
  for (const auto& bus : service.buses) {
    const double after = std::min(before, survival(cost, bus.departure));
    out.push_back({before - after, bus.arrival()});
    before = after;
  }
  out.push_back({before, service.walk.arrival()});
  return ArrivalMixture(std::move(out));
}

PathLabel origin_label(NodeId origin, Time t0, const Utility& u) {
  auto cost = ArrivalMixture::point(t0);
  const double priority = expected_utility(cost, u);
  return PathLabel{{origin}, {}, std::move(cost), priority};
}

PathLabel extend(const PathLabel& label, const Network& net, EdgeId e, const Utility& u) {
  const auto& edge = net.edge(e);
  if (edge.from != label.node()) {
    std::ostringstream os;
    os << "edge " << e << " leaves " << net.name(edge.from) << ", not " << net.name(label.node());
    throw Error(ErrorKind::InvalidEdge, os.str());
  }
  PathLabel next{label.path, label.edges, extend_cost(label.cost, edge), 0.0};
  next.path.push_back(edge.to);
  next.edges.push_back(e);
  next.priority = expected_utility(next.cost, u);
  return next;
}

bool ranks_before(const PathLabel& a, const PathLabel& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
  if (a.path != b.path) return a.path < b.path;
  return a.edges < b.edges;
}

namespace {

using LabelPtr = std::shared_ptr<const PathLabel>;

struct QueueOrder {
  bool operator()(const LabelPtr& a, const LabelPtr& b) const { return ranks_before(*b, *a); }
};

void require_node(const Network& net, NodeId n, const char* role) {
  if (n >= net.node_count()) {
    std::ostringstream os;
    os << role << " node " << n << " is not in the network";
    throw Error(ErrorKind::MissingNode, os.str());
  }
}

void require_consistent(const Network& net) {
  if (!net.consistent()) {
    throw Error(ErrorKind::InconsistentNetwork,
                "network is not stochastically consistent: " +
                    net.validation().violations.front().message);
  }
}

bool on_path(const PathLabel& label, NodeId n) {
  return std::find(label.path.begin(), label.path.end(), n) != label.path.end();
}

/// Applies the pruning rule to a popped label. Returns false if it is pruned.
bool admit(std::vector<LabelPtr>& stored, const LabelPtr& label, Pruning pruning) {
  switch (pruning) {
    case Pruning::None:
      stored.push_back(label);
      return true;
    case Pruning::ExpectedValue:
      if (!stored.empty() && stored.front()->priority >= label->priority) return false;
      stored.assign(1, label);
      return true;
    case Pruning::Dominance:
      break;
  }
  for (const auto& s : stored) {
    if (dominates(s->cost, label->cost)) return false;
  }
  std::erase_if(stored, [&](const LabelPtr& s) { return dominates(label->cost, s->cost); });
  stored.push_back(label);
  return true;
}

}  // namespace

SearchResult priority_first_search(const Network& net, NodeId origin, const ArrivalMixture& start,
                                   const Utility& u, const TerminalUtility& terminal,
                                   const SearchOptions& options) {
  require_node(net, origin, "origin");
  require_consistent(net);

  auto score = [&](const ArrivalMixture& cost, NodeId node) {
    const Utility* t = terminal(node);
    return expected_utility(cost, t ? *t : u);
  };

  SearchStats stats;
  std::priority_queue<LabelPtr, std::vector<LabelPtr>, QueueOrder> queue;
  auto push = [&](PathLabel label) {
    ++stats.generated;
    if (options.label_cap != 0 && stats.generated > options.label_cap) {
      std::ostringstream os;
      os << "search generated more than " << options.label_cap << " labels";
      throw Error(ErrorKind::LabelCapExceeded, os.str());
    }
    queue.push(std::make_shared<const PathLabel>(std::move(label)));
    stats.peak_queue = std::max(stats.peak_queue, queue.size());
  };

  {
    PathLabel first{{origin}, {}, start, 0.0};
    first.priority = score(first.cost, origin);
    push(std::move(first));
  }

  // Closed lists. With no pruning only terminal labels need to be kept.
  std::vector<std::vector<LabelPtr>> closed(net.node_count());
  std::vector<NodeId> terminals_seen;
  bool have_best = false;
  double best_priority = 0.0;

  while (!queue.empty()) {
    if (options.termination == Termination::BestFirst && have_best &&
        queue.top()->priority < best_priority) {
      break;
    }
    LabelPtr label = queue.top();
    queue.pop();
    const NodeId node = label->node();
    const bool is_terminal = terminal(node) != nullptr;

    if (!is_terminal && options.pruning == Pruning::None) {
      ++stats.expanded;
    } else if (admit(closed[node], label, options.pruning)) {
      ++stats.expanded;
    } else {
      ++stats.pruned;
      continue;
    }

    if (is_terminal) {
      if (std::find(terminals_seen.begin(), terminals_seen.end(), node) == terminals_seen.end()) {
        terminals_seen.push_back(node);
      }
      if (!have_best || label->priority > best_priority) {
        have_best = true;
        best_priority = label->priority;
      }
      continue;
    }

    for (EdgeId e : net.outgoing(node)) {
      const auto& edge = net.edge(e);
      if (on_path(*label, edge.to)) continue;
      PathLabel next{label->path, label->edges, extend_cost(label->cost, edge), 0.0};
      next.path.push_back(edge.to);
      next.edges.push_back(e);
      next.priority = score(next.cost, edge.to);
      push(std::move(next));
    }
  }
  stats.remaining = queue.size();

  SearchResult result{PathLabel{{origin}, {}, start, 0.0}, {}, stats};
  for (NodeId t : terminals_seen) {
    for (const auto& l : closed[t]) result.admissible.push_back(*l);
  }
  if (result.admissible.empty()) {
    throw Error(ErrorKind::UnreachableDestination,
                "no path from " + net.name(origin) + " reaches the destination");
  }
  std::sort(result.admissible.begin(), result.admissible.end(), ranks_before);
  result.best = result.admissible.front();
  return result;
}

namespace {

TerminalUtility single_destination(NodeId dest, const Utility& u) {
  return [dest, &u](NodeId n) -> const Utility* { return n == dest ? &u : nullptr; };
}

}  // namespace

SearchResult pfs_dominance(const Network& net, NodeId origin, Time t0, NodeId dest,
                           const Utility& u, Termination termination) {
  require_node(net, dest, "destination");
  return priority_first_search(net, origin, ArrivalMixture::point(t0), u,
                               single_destination(dest, u),
                               {Pruning::Dominance, termination, 0});
}

SearchResult expected_value_search(const Network& net, NodeId origin, Time t0, NodeId dest,
                                   const Utility& u) {
  require_node(net, dest, "destination");
  return priority_first_search(net, origin, ArrivalMixture::point(t0), u,
                               single_destination(dest, u),
                               {Pruning::ExpectedValue, Termination::BestFirst, 0});
}

SearchResult unpruned_search(const Network& net, NodeId origin, Time t0, NodeId dest,
                             const Utility& u, std::size_t label_cap) {
  require_node(net, dest, "destination");
  return priority_first_search(net, origin, ArrivalMixture::point(t0), u,
                               single_destination(dest, u),
                               {Pruning::None, Termination::BestFirst, label_cap});
}

std::size_t count_paths(const Network& net, NodeId origin, NodeId dest, std::size_t saturate_at) {
  require_node(net, origin, "origin");
  require_node(net, dest, "destination");
  if (!net.acyclic()) throw Error(ErrorKind::CyclicNetwork, "path counting needs an acyclic network");
  std::vector<std::size_t> ways(net.node_count(), 0);
  ways[origin] = 1;
  for (NodeId n : net.topological_order()) {
    if (ways[n] == 0 || n == dest) continue;
    for (EdgeId e : net.outgoing(n)) {
      auto& w = ways[net.edge(e).to];
      w = std::min(saturate_at, w + ways[n]);
    }
  }
  return ways[dest];
}

Enumeration enumerate_paths(const Network& net, NodeId origin, Time t0, NodeId dest,
                            const Utility& u, std::size_t limit) {
  const std::size_t total = count_paths(net, origin, dest, limit + 1);
  if (total > limit) {
    std::ostringstream os;
    os << "more than " << limit << " paths from " << net.name(origin) << " to " << net.name(dest);
    throw Error(ErrorKind::TooManyPaths, os.str());
  }
  if (total == 0) {
    throw Error(ErrorKind::UnreachableDestination,
                "no path from " + net.name(origin) + " to " + net.name(dest));
  }
  Enumeration out{origin_label(origin, t0, u), {}};
  out.paths.reserve(total);

  std::vector<char> reaches(net.node_count(), 0);
  reaches[dest] = 1;
  const auto order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (EdgeId e : net.outgoing(*it)) reaches[*it] |= reaches[net.edge(e).to];
  }

  std::vector<PathLabel> stack{origin_label(origin, t0, u)};
  while (!stack.empty()) {
    PathLabel label = std::move(stack.back());
    stack.pop_back();
    if (label.node() == dest) {
      out.paths.push_back(std::move(label));
      continue;
    }
    for (EdgeId e : net.outgoing(label.node())) {
      if (reaches[net.edge(e).to]) stack.push_back(extend(label, net, e, u));
    }
  }
  out.best = *std::min_element(out.paths.begin(), out.paths.end(), ranks_before);
  return out;
}

}  // namespace tdsp
