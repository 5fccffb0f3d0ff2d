#include "tdsp/network.hpp"

#include <sstream>

#include "tdsp/errors.hpp"

namespace tdsp {

std::string_view to_string(Violation::Condition c) noexcept {
  using C = Violation::Condition;
  switch (c) {
    case C::DepartureOrder: return "departure-order";
    case C::EarliestArrivalOrder: return "earliest-arrival-order";
    case C::DelayOrder: return "delay-order";
    case C::ArrivesBeforeDeparture: return "arrives-before-departure";
    case C::NonPositiveDelay: return "non-positive-delay";
    case C::WalkNotDominated: return "walk-not-dominated";
    case C::NegativeDuration: return "negative-duration";
  }
  return "unknown";
}

namespace {

std::string edge_label(const Network& net, EdgeId e) {
  const auto& edge = net.edge(e);
  std::ostringstream os;
  os << "edge " << e << " (" << net.name(edge.from) << " -> " << net.name(edge.to) << ")";
  return os.str();
}

void check_schedule(const Network& net, EdgeId e, const BusService& s,
                    std::vector<Violation>& out) {
  using C = Violation::Condition;
  const auto& buses = s.buses;
  auto report = [&](C c, std::optional<std::size_t> i, std::optional<std::size_t> j,
                    const std::string& detail) {
    std::ostringstream os;
    os << edge_label(net, e) << ": " << to_string(c);
    if (i && j) {
      os << " between bus " << *i << " and bus " << *j;
    } else if (i) {
      os << " at bus " << *i;
    }
    os << ": " << detail;
    out.push_back({e, c, i, j, os.str()});
  };

  for (std::size_t i = 0; i < buses.size(); ++i) {
    const auto& b = buses[i];
    if (!(b.delay > 0.0)) {
      std::ostringstream os;
      os << "lambda=" << b.delay;
      report(C::NonPositiveDelay, i, std::nullopt, os.str());
    }
    if (b.departure > b.earliest) {
      std::ostringstream os;
      os << "d=" << b.departure << " > M=" << b.earliest;
      report(C::ArrivesBeforeDeparture, i, std::nullopt, os.str());
    }
    if (b.earliest > s.walk.earliest || b.delay > s.walk.delay) {
      std::ostringstream os;
      os << "bus (M=" << b.earliest << ", lambda=" << b.delay << ") vs walk (M=" << s.walk.earliest
         << ", lambda=" << s.walk.delay << ")";
      report(C::WalkNotDominated, i, std::nullopt, os.str());
    }
  }
  for (std::size_t i = 0; i + 1 < buses.size(); ++i) {
    const auto& a = buses[i];
    const auto& b = buses[i + 1];
    if (!(a.departure < b.departure)) {
      std::ostringstream os;
      os << "d=" << a.departure << " then d=" << b.departure;
      report(C::DepartureOrder, i, i + 1, os.str());
    }
    if (a.earliest > b.earliest) {
      std::ostringstream os;
      os << "M=" << a.earliest << " then M=" << b.earliest;
      report(C::EarliestArrivalOrder, i, i + 1, os.str());
    }
    if (a.delay > b.delay) {
      std::ostringstream os;
      os << "lambda=" << a.delay << " then lambda=" << b.delay;
      report(C::DelayOrder, i, i + 1, os.str());
    }
  }
  if (!(s.walk.delay > 0.0)) {
    std::ostringstream os;
    os << "walk lambda=" << s.walk.delay;
    report(C::NonPositiveDelay, std::nullopt, std::nullopt, os.str());
  }
}

}  // namespace

ValidationReport validate_consistency(const Network& net) {
  ValidationReport report;
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const auto& edge = net.edge(e);
    if (edge.is_bus()) {
      check_schedule(net, e, edge.buses(), report.violations);
    } else if (!(edge.duration() >= 0.0)) {
      std::ostringstream os;
      os << edge_label(net, e) << ": negative-duration: " << edge.duration();
      report.violations.push_back(
          {e, Violation::Condition::NegativeDuration, std::nullopt, std::nullopt, os.str()});
    }
  }
  return report;
}

Network::Network(std::vector<std::string> node_names, std::vector<Edge> edges)
    : names_(std::move(node_names)), edges_(std::move(edges)) {
  index_.reserve(names_.size());
  for (NodeId n = 0; n < names_.size(); ++n) {
    if (!index_.emplace(names_[n], n).second) {
      throw Error(ErrorKind::InvalidInput, "duplicate node '" + names_[n] + "'");
    }
  }
  outgoing_.assign(names_.size(), {});
  std::vector<std::size_t> indegree(names_.size(), 0);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    if (edge.from >= names_.size() || edge.to >= names_.size()) {
      std::ostringstream os;
      os << "edge " << e << " has an endpoint outside the node set";
      throw Error(ErrorKind::InvalidInput, os.str());
    }
    outgoing_[edge.from].push_back(e);
    ++indegree[edge.to];
  }

  // Kahn's algorithm; a leftover node means a cycle.
  std::vector<NodeId> ready;
  for (NodeId n = names_.size(); n-- > 0;) {
    if (indegree[n] == 0) ready.push_back(n);
  }
  topo_.reserve(names_.size());
  while (!ready.empty()) {
    const NodeId n = ready.back();
    ready.pop_back();
    topo_.push_back(n);
    for (EdgeId e : outgoing_[n]) {
      if (--indegree[edges_[e].to] == 0) ready.push_back(edges_[e].to);
    }
  }
  acyclic_ = topo_.size() == names_.size();
  if (!acyclic_) topo_.clear();

  report_ = validate_consistency(*this);
}

std::optional<NodeId> Network::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId Network::id(std::string_view name) const {
  if (auto n = find(name)) return *n;
  throw Error(ErrorKind::MissingNode, "unknown node '" + std::string(name) + "'");
}

}  // namespace tdsp
