#include "tdsp/network_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "tdsp/errors.hpp"

namespace tdsp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

std::string node_ref(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  fail(where, "node ids must be strings or integers");
}

std::pair<Time, Time> departure_span(const Edge& edge) {
  const auto& buses = edge.buses().buses;
  const auto [lo, hi] = std::minmax_element(
      buses.begin(), buses.end(),
      [](const Bus& a, const Bus& b) { return a.departure < b.departure; });
  return {lo->departure, hi->departure};
}

}  // namespace

json network_to_json(const Network& net) {
  json doc;
  doc["nodes"] = json::array();
  for (const auto& name : net.names()) doc["nodes"].push_back(name);
  doc["edges"] = json::array();
  for (const auto& edge : net.edges()) {
    json e;
    e["from"] = net.name(edge.from);
    e["to"] = net.name(edge.to);
    if (edge.is_bus()) {
      const auto& s = edge.buses();
      e["kind"] = "bus";
      e["buses"] = json::array();
      for (const auto& b : s.buses) {
        e["buses"].push_back({{"d", b.departure}, {"M", b.earliest}, {"lambda", b.delay}});
      }
      e["walk"] = {{"M", s.walk.earliest}, {"lambda", s.walk.delay}};
    } else {
      e["kind"] = "constant";
      e["duration"] = edge.duration();
    }
    doc["edges"].push_back(std::move(e));
  }
  return doc;
}

std::string save_network(const Network& net) { return network_to_json(net).dump(2) + "\n"; }

LoadedNetwork load_network(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, document.size());
    const auto line = 1 + std::count(document.begin(), document.begin() + upto, '\n');
    fail("line " + std::to_string(line), e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");

  const auto& nodes_json = field(doc, "nodes", "document");
  if (!nodes_json.is_array()) fail("nodes", "expected an array");
  std::vector<std::string> names;
  std::map<std::string, NodeId> ids;
  for (std::size_t i = 0; i < nodes_json.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    auto name = node_ref(nodes_json[i], where);
    if (!ids.emplace(name, names.size()).second) fail(where, "duplicate node '" + name + "'");
    names.push_back(std::move(name));
  }

  const auto& edges_json = field(doc, "edges", "document");
  if (!edges_json.is_array()) fail("edges", "expected an array");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const auto& ej = edges_json[i];
    auto endpoint = [&](const char* key) {
      const auto name = node_ref(field(ej, key, where), where + "." + key);
      const auto it = ids.find(name);
      if (it == ids.end()) fail(where + "." + key, "unknown node '" + name + "'");
      return it->second;
    };
    Edge edge;
    edge.from = endpoint("from");
    edge.to = endpoint("to");
    const auto& kind = field(ej, "kind", where);
    if (kind == "bus") {
      BusService s;
      const auto& buses = field(ej, "buses", where);
      if (!buses.is_array()) fail(where + ".buses", "expected an array");
      for (std::size_t k = 0; k < buses.size(); ++k) {
        const std::string bw = where + ".buses[" + std::to_string(k) + "]";
        s.buses.push_back(
            {number(buses[k], "d", bw), number(buses[k], "M", bw), number(buses[k], "lambda", bw)});
      }
      const auto& walk = field(ej, "walk", where);
      s.walk = {number(walk, "M", where + ".walk"), number(walk, "lambda", where + ".walk")};
      edge.service = std::move(s);
    } else if (kind == "constant") {
      edge.service = FixedDuration{number(ej, "duration", where)};
    } else {
      fail(where + ".kind", "expected \"bus\" or \"constant\"");
    }
    edges.push_back(std::move(edge));
  }

  // Parallel bus edges are only allowed when their schedules do not overlap.
  std::map<std::pair<NodeId, NodeId>, std::vector<std::size_t>> bus_edges;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (!edges[j].is_bus() || edges[j].buses().buses.empty()) continue;
    auto& seen = bus_edges[{edges[j].from, edges[j].to}];
    const auto [b_first, b_last] = departure_span(edges[j]);
    for (std::size_t i : seen) {
      const auto [a_first, a_last] = departure_span(edges[i]);
      const bool overlap = a_first <= b_last && b_first <= a_last;
      if (overlap) {
        fail("edges[" + std::to_string(j) + "]",
             "bus schedule overlaps parallel bus edge edges[" + std::to_string(i) + "] (" +
                 names[edges[i].from] + " -> " + names[edges[i].to] + ")");
      }
    }
    seen.push_back(j);
  }

  LoadedNetwork out{Network(std::move(names), std::move(edges)), {}};
  out.warnings = out.network.validation();
  return out;
}

void save_network_file(const Network& net, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  os << save_network(net);
}

LoadedNetwork load_network_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ParseError, "cannot read " + path.string());
  std::stringstream buf;
  buf << is.rdbuf();
  return load_network(buf.str());
}

}  // namespace tdsp
