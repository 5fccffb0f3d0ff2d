#include "tdsp/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "tdsp/errors.hpp"

namespace tdsp {

Policy::Policy(std::size_t node_count, NodeId dest, Utility u)
    : dest_(dest), utility_(std::move(u)), nodes_(node_count) {}

const std::vector<IntervalChoice>& Policy::intervals(NodeId node) const {
  if (!has(node)) {
    std::ostringstream os;
    os << "no policy for node " << node;
    throw Error(ErrorKind::MissingNode, os.str());
  }
  return nodes_[node];
}

const IntervalChoice& Policy::at(NodeId node, Time t) const {
  const auto& list = intervals(node);
  const auto it = std::lower_bound(list.begin(), list.end(), t,
                                   [](const IntervalChoice& c, Time x) { return c.end < x; });
  return it == list.end() ? list.back() : *it;
}

namespace {

template <class Interval>
Utility step_from(const std::vector<Interval>& list) {
  std::vector<Time> breakpoints;
  std::vector<double> values{list.front().value};
  for (std::size_t k = 1; k < list.size(); ++k) {
    // Clamp keeps the step nonincreasing against last-bit noise.
    const double v = std::min(list[k].value, values.back());
    if (v == values.back()) continue;
    breakpoints.push_back(list[k].start);
    values.push_back(v);
  }
  return Utility::step(std::move(breakpoints), std::move(values));
}

}  // namespace

Utility Policy::value_function(NodeId node) const {
  if (node == dest_) return utility_;
  return step_from(intervals(node));
}

void Policy::set(NodeId node, std::vector<IntervalChoice> intervals) {
  nodes_.at(node) = std::move(intervals);
}

double evaluate_policy(const Policy& policy, NodeId node, Time t) {
  return policy.at(node, t).value;
}

std::string to_string(ChoiceKind kind) {
  switch (kind) {
    case ChoiceKind::Terminal: return "terminal";
    case ChoiceKind::Bus: return "bus";
    case ChoiceKind::Walk: return "walk";
    case ChoiceKind::Fixed: return "fixed";
    case ChoiceKind::Stranded: return "stranded";
  }
  return "unknown";
}

namespace {

void require_node(const Network& net, NodeId n, const char* role) {
  if (n >= net.node_count()) {
    std::ostringstream os;
    os << role << " " << n << " is not a node of the network";
    throw Error(ErrorKind::MissingNode, os.str());
  }
}

void require_plannable(const Network& net, const Utility& u) {
  if (!u.is_step_shaped()) {
    throw Error(ErrorKind::UnsupportedUtility,
                "adaptive planning needs a deadline or step utility, got " + u.describe());
  }
  if (!net.acyclic()) {
    throw Error(ErrorKind::CyclicNetwork, "adaptive planning needs an acyclic network");
  }
  if (!net.consistent()) {
    throw Error(ErrorKind::InconsistentNetwork,
                "network is not stochastically consistent: " +
                    net.validation().violations.front().message);
  }
}

/// Intervals (-inf, b_0], (b_0, b_1], ..., (b_last, inf) of a step utility.
std::vector<IntervalChoice> terminal_intervals(const Utility& u) {
  std::vector<IntervalChoice> out;
  const auto b = u.breakpoints();
  const auto v = u.values();
  Time start = -kInfinity;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Time end = i < b.size() ? b[i] : kInfinity;
    out.push_back({start, end, Choice{ChoiceKind::Terminal, 0, 0, 0}, v[i]});
    start = end;
  }
  return out;
}

struct BusOptions {
  EdgeId edge;
  NodeId to;
  std::vector<Time> departures;
  std::vector<double> value;      // E[V_to] on boarding bus j
  std::vector<std::size_t> best;  // argmax of value over buses j.. (earliest on ties)
  double walk_value;
};

struct FixedOption {
  EdgeId edge;
  NodeId to;
  std::vector<Time> shifted;  // successor breakpoints minus the duration
  std::span<const double> values;
};

struct Candidate {
  double value;
  std::tuple<int, Time, EdgeId> rank;
  Choice choice;
};

std::vector<IntervalChoice> solve_node(const Network& net, NodeId node,
                                       const std::vector<std::optional<Utility>>& vf) {
  std::vector<BusOptions> buses;
  std::vector<FixedOption> fixed;
  std::vector<Time> epochs;
  for (EdgeId e : net.outgoing(node)) {
    const auto& edge = net.edge(e);
    const Utility& next = *vf[edge.to];
    if (edge.is_bus()) {
      const auto& svc = edge.buses();
      BusOptions opt{e, edge.to, {}, {}, {}, 0.0};
      for (const auto& bus : svc.buses) {
        opt.departures.push_back(bus.departure);
        opt.value.push_back(expected_utility(
            ArrivalMixture::single(ShiftedExponential(bus.earliest, bus.delay)), next));
        epochs.push_back(bus.departure);
      }
      opt.best.resize(opt.value.size());
      for (std::size_t j = opt.value.size(); j-- > 0;) {
        opt.best[j] = (j + 1 < opt.value.size() && opt.value[opt.best[j + 1]] > opt.value[j])
                          ? opt.best[j + 1]
                          : j;
      }
      opt.walk_value = expected_utility(
          ArrivalMixture::single(ShiftedExponential(svc.walk.earliest, svc.walk.delay)), next);
      buses.push_back(std::move(opt));
    } else {
      FixedOption opt{e, edge.to, {}, next.values()};
      for (Time b : next.breakpoints()) opt.shifted.push_back(b - edge.duration());
      epochs.insert(epochs.end(), opt.shifted.begin(), opt.shifted.end());
      fixed.push_back(std::move(opt));
    }
  }
  std::sort(epochs.begin(), epochs.end());
  epochs.erase(std::unique(epochs.begin(), epochs.end()), epochs.end());

  std::vector<IntervalChoice> out;
  std::vector<Candidate> candidates;
  Time start = -kInfinity;
  for (std::size_t k = 0; k <= epochs.size(); ++k) {
    const Time end = k < epochs.size() ? epochs[k] : kInfinity;
    candidates.clear();
    for (const auto& opt : buses) {
      const auto j = static_cast<std::size_t>(
          std::lower_bound(opt.departures.begin(), opt.departures.end(), end) -
          opt.departures.begin());
      if (j < opt.departures.size()) {
        const std::size_t b = opt.best[j];
        candidates.push_back({opt.value[b], {0, opt.departures[b], opt.edge},
                              Choice{ChoiceKind::Bus, opt.edge, b, opt.to}});
      }
    }
    for (const auto& opt : fixed) {
      // Arrival at `to` falls in its interval i exactly when end lies in
      // (shifted[i-1], shifted[i]].
      const auto i = std::lower_bound(opt.shifted.begin(), opt.shifted.end(), end) -
                     opt.shifted.begin();
      candidates.push_back({opt.values[static_cast<std::size_t>(i)], {1, 0.0, opt.edge},
                            Choice{ChoiceKind::Fixed, opt.edge, 0, opt.to}});
    }
    for (const auto& opt : buses) {
      candidates.push_back(
          {opt.walk_value, {2, 0.0, opt.edge}, Choice{ChoiceKind::Walk, opt.edge, 0, opt.to}});
    }
    const Candidate* pick = &candidates.front();
    for (const auto& c : candidates) {
      if (c.value > pick->value || (c.value == pick->value && c.rank < pick->rank)) pick = &c;
    }
    if (!out.empty() && out.back().choice == pick->choice && out.back().value == pick->value) {
      out.back().end = end;
    } else {
      out.push_back({start, end, pick->choice, pick->value});
    }
    start = end;
  }
  return out;
}

}  // namespace

Policy adaptive_path(const Network& net, NodeId dest, const Utility& u) {
  require_node(net, dest, "destination");
  require_plannable(net, u);

  Policy policy(net.node_count(), dest, u);
  std::vector<std::optional<Utility>> vf(net.node_count());
  const auto& order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId n = *it;
    if (n == dest) {
      policy.set(n, terminal_intervals(u));
      vf[n] = u;
      continue;
    }
    if (net.outgoing(n).empty()) {
      policy.set(n, {IntervalChoice{-kInfinity, kInfinity, Choice{}, 0.0}});
    } else {
      policy.set(n, solve_node(net, n, vf));
    }
    vf[n] = policy.value_function(n);
  }
  return policy;
}

nlohmann::json policy_to_json(const Policy& policy, const Network& net) {
  auto bound = [](Time t) { return std::isfinite(t) ? nlohmann::json(t) : nlohmann::json(nullptr); };
  nlohmann::json nodes = nlohmann::json::object();
  for (NodeId n = 0; n < policy.node_count(); ++n) {
    if (!policy.has(n)) continue;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& iv : policy.intervals(n)) {
      nlohmann::json choice{{"kind", to_string(iv.choice.kind)}};
      const auto kind = iv.choice.kind;
      if (kind == ChoiceKind::Bus || kind == ChoiceKind::Walk || kind == ChoiceKind::Fixed) {
        choice["edge"] = iv.choice.edge;
        choice["to"] = net.name(iv.choice.to);
      }
      if (kind == ChoiceKind::Bus) {
        choice["bus"] = iv.choice.bus;
        choice["departure"] = net.edge(iv.choice.edge).buses().buses[iv.choice.bus].departure;
      }
      list.push_back({{"start", bound(iv.start)},
                      {"end", bound(iv.end)},
                      {"choice", std::move(choice)},
                      {"value", iv.value}});
    }
    nodes[net.name(n)] = std::move(list);
  }
  return {{"dest", net.name(policy.dest())},
          {"utility", policy.utility().describe()},
          {"nodes", std::move(nodes)}};
}

namespace {

/// Arrival-time breakpoints at `root` beyond which the best segment can
/// change: bus departures reachable over fixed edges and the breakpoints of
/// decision nodes reached over fixed edges, each moved back by the fixed
/// travel time in between.
std::vector<Time> segment_epochs(const Network& net, NodeId root,
                                 const std::vector<std::optional<Utility>>& vf) {
  std::vector<Time> epochs;
  std::vector<std::pair<NodeId, Time>> stack{{root, 0.0}};
  while (!stack.empty()) {
    const auto [node, lead] = stack.back();
    stack.pop_back();
    for (EdgeId e : net.outgoing(node)) {
      const auto& edge = net.edge(e);
      if (edge.is_bus()) {
        for (const auto& bus : edge.buses().buses) epochs.push_back(bus.departure - lead);
        continue;
      }
      const Time reach = lead + edge.duration();
      if (vf[edge.to]) {
        for (Time b : vf[edge.to]->breakpoints()) epochs.push_back(b - reach);
      } else {
        stack.emplace_back(edge.to, reach);
      }
    }
  }
  std::sort(epochs.begin(), epochs.end());
  epochs.erase(std::unique(epochs.begin(), epochs.end()), epochs.end());
  return epochs;
}

}  // namespace

HybridPlan hybrid_plan(const Network& net, const std::vector<NodeId>& adaptive_nodes,
                       NodeId origin, Time t0, NodeId dest, const Utility& u) {
  require_node(net, origin, "origin");
  require_node(net, dest, "destination");
  for (NodeId n : adaptive_nodes) require_node(net, n, "adaptive node");
  require_plannable(net, u);

  std::vector<bool> decision(net.node_count(), false);
  for (NodeId n : adaptive_nodes) decision[n] = true;
  decision[dest] = true;

  HybridPlan plan{{}, PathLabel{{origin}, {}, ArrivalMixture::point(t0), 0.0}, 0.0};
  plan.decisions.resize(net.node_count());
  // Value functions of finished decision nodes; they double as terminal
  // utilities for segment searches.
  std::vector<std::optional<Utility>> vf(net.node_count());
  vf[dest] = u;
  for (const auto& iv : terminal_intervals(u)) {
    plan.decisions[dest].push_back({iv.start, iv.end, {}, {}, iv.value});
  }

  auto run_segment = [&](NodeId from, Time t) -> std::optional<PathLabel> {
    const TerminalUtility terminal = [&, from](NodeId n) -> const Utility* {
      return n != from && vf[n] ? &*vf[n] : nullptr;
    };
    try {
      // Exhaustive: absolute-time walks can make a later label's utility
      // rise, which best-first termination does not account for.
      return priority_first_search(net, from, ArrivalMixture::point(t), u, terminal,
                                   {Pruning::Dominance, Termination::Exhaustive, 0})
          .best;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnreachableDestination) throw;
      return std::nullopt;
    }
  };

  const auto& order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId n = *it;
    if (!decision[n] || n == dest) continue;
    const auto epochs = segment_epochs(net, n, vf);
    auto& table = plan.decisions[n];
    Time start = -kInfinity;
    for (std::size_t k = 0; k <= epochs.size(); ++k) {
      const Time end = k < epochs.size() ? epochs[k] : kInfinity;
      // Any interior time represents the interval; avoid the endpoints so
      // shifted breakpoints cannot round across a boundary.
      Time probe = 0.0;
      if (epochs.empty()) {
        probe = 0.0;
      } else if (k == 0) {
        probe = end - 1.0;
      } else if (k == epochs.size()) {
        probe = start + 1.0;
      } else {
        probe = start + 0.5 * (end - start);
      }
      SegmentChoice choice{start, end, {}, {}, 0.0};
      if (auto best = run_segment(n, probe)) {
        choice.path = std::move(best->path);
        choice.edges = std::move(best->edges);
        choice.value = best->priority;
      }
      if (!table.empty() && table.back().edges == choice.edges &&
          table.back().value == choice.value) {
        table.back().end = end;
      } else {
        table.push_back(std::move(choice));
      }
      start = end;
    }
    vf[n] = step_from(table);
  }

  if (origin == dest) {
    plan.first_segment = PathLabel{{origin}, {}, ArrivalMixture::point(t0), u(t0)};
    plan.expected_utility = u(t0);
    return plan;
  }
  auto first = run_segment(origin, t0);
  if (!first) {
    throw Error(ErrorKind::UnreachableDestination,
                "no path from " + net.name(origin) + " reaches a decision point");
  }
  plan.first_segment = std::move(*first);
  plan.expected_utility = plan.first_segment.priority;
  return plan;
}

}  // namespace tdsp
