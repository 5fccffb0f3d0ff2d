#include <doctest.h>

#include <cstring>
#include <functional>

#include "support/oracles.hpp"
#include "tdsp/errors.hpp"
#include "tdsp/grid.hpp"
#include "tdsp/network.hpp"
#include "tdsp/network_io.hpp"

using namespace tdsp;

namespace {

Network single_edge(std::vector<Bus> buses, Walk walk) {
  return Network({"a", "b"}, {Edge{0, 1, BusService{std::move(buses), walk}}});
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

// Plain DFS over the adjacency, independent of the library's path counter.
std::uint64_t dfs_paths(const Network& net, NodeId from, NodeId to) {
  if (from == to) return 1;
  std::uint64_t total = 0;
  for (EdgeId e : net.outgoing(from)) total += dfs_paths(net, net.edge(e).to, to);
  return total;
}

}  // namespace

TEST_CASE("validation accepts an empty network") {
  CHECK(validate_consistency(Network{}).consistent());
  CHECK(Network({"x"}, {}).consistent());
}

TEST_CASE("validation names the offending bus pair") {
  SUBCASE("decreasing lambda") {
    const auto net = single_edge({{0, 10, 5}, {30, 35, 3}}, {100, 20});
    const auto report = validate_consistency(net);
    REQUIRE(report.violations.size() == 1);
    const auto& v = report.violations.front();
    CHECK(v.condition == Violation::Condition::DelayOrder);
    CHECK(v.edge == 0);
    CHECK(v.first == 0u);
    CHECK(v.second == 1u);
    CHECK(v.message.find("bus 0 and bus 1") != std::string::npos);

    // The later bus really does beat the earlier one for some deadline.
    const Distribution early = ShiftedExponential(10, 5);
    const Distribution late = ShiftedExponential(35, 3);
    CHECK(oracle::reversal_found(early, late, 0.0, 400.0));
  }
  SUBCASE("bus arriving before it leaves") {
    const auto net = single_edge({{0, 10, 5}, {30, 25, 5}}, {100, 20});
    const auto report = validate_consistency(net);
    bool found = false;
    for (const auto& v : report.violations) {
      if (v.condition == Violation::Condition::ArrivesBeforeDeparture) {
        CHECK(v.first == 1u);
        CHECK_FALSE(v.second.has_value());
        found = true;
      }
    }
    CHECK(found);
  }
  SUBCASE("departures out of order") {
    const auto net = single_edge({{30, 40, 5}, {20, 45, 5}}, {100, 20});
    const auto report = validate_consistency(net);
    const auto& v = report.violations.front();
    CHECK(v.condition == Violation::Condition::DepartureOrder);
    CHECK(v.first == 0u);
    CHECK(v.second == 1u);
  }
  SUBCASE("walk must be dominated by every bus") {
    const auto net = single_edge({{0, 10, 5}, {30, 40, 8}}, {100, 6});
    const auto report = validate_consistency(net);
    const auto& v = report.violations.front();
    CHECK(v.condition == Violation::Condition::WalkNotDominated);
    CHECK(v.first == 1u);
  }
  SUBCASE("non-positive delay and negative duration") {
    const auto net = Network({"a", "b", "c"}, {Edge{0, 1, BusService{{{0, 10, 0}}, {100, 5}}},
                                               Edge{1, 2, FixedDuration{-1}}});
    const auto report = validate_consistency(net);
    CHECK_FALSE(report.consistent());
    CHECK(report.violations.front().condition == Violation::Condition::NonPositiveDelay);
    CHECK(report.violations.back().condition == Violation::Condition::NegativeDuration);
    CHECK(report.violations.back().edge == 1);
  }
}

TEST_CASE("network construction") {
  CHECK_THROWS_AS(Network({"a", "a"}, {}), Error);
  CHECK_THROWS_AS(Network({"a"}, {Edge{0, 3, FixedDuration{1}}}), Error);

  const Network cyclic({"a", "b"}, {Edge{0, 1, FixedDuration{1}}, Edge{1, 0, FixedDuration{1}}});
  CHECK_FALSE(cyclic.acyclic());
  CHECK(cyclic.topological_order().empty());

  const Network chain({"a", "b", "c"}, {Edge{1, 2, FixedDuration{1}}, Edge{0, 1, FixedDuration{1}}});
  CHECK(chain.acyclic());
  const auto order = chain.topological_order();
  REQUIRE(order.size() == 3);
  CHECK(order[0] == 0);
  CHECK(order[1] == 1);
  CHECK(order[2] == 2);

  CHECK(chain.id("b") == 1);
  try {
    chain.id("zz");
    FAIL("expected missing node");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingNode);
  }
}

TEST_CASE("grid generation") {
  GridSpec spec;
  spec.n = 1;
  auto one = generate_grid(spec);
  CHECK(one.node_count() == 1);
  CHECK(one.edge_count() == 0);

  spec.n = 3;
  auto three = generate_grid(spec);
  CHECK(three.node_count() == 9);
  CHECK(three.edge_count() == 12);
  CHECK(three.acyclic());
  CHECK(three.name(0) == "0,0");
  CHECK(three.name(8) == "2,2");

  SUBCASE("departures are multiples of the headway up to the horizon") {
    GridSpec s;
    s.n = 2;
    s.headway = {30, 30};
    s.trip = {7, 7};
    s.delay = {4, 4};
    s.horizon = 120;
    const auto net = generate_grid(s);
    for (const auto& edge : net.edges()) {
      const auto& buses = edge.buses().buses;
      REQUIRE(buses.size() == 5);
      for (std::size_t k = 0; k < buses.size(); ++k) {
        CHECK(buses[k].departure == 30.0 * k);
        CHECK(buses[k].earliest == 30.0 * k + 7);
        CHECK(buses[k].delay == 4.0);
      }
      CHECK(edge.buses().walk.earliest == 120 + 7 + 60);
      CHECK(edge.buses().walk.delay == 8.0);
    }
  }

  SUBCASE("edges only go right or up") {
    for (const auto& edge : three.edges()) {
      const int fr = static_cast<int>(edge.from) / 3;
      const int fc = static_cast<int>(edge.from) % 3;
      const int tr = static_cast<int>(edge.to) / 3;
      const int tc = static_cast<int>(edge.to) % 3;
      CHECK(((tr == fr && tc == fc + 1) || (tc == fc && tr == fr + 1)));
    }
  }
}

TEST_CASE("grid generation rejects degenerate specs") {
  auto expect_invalid = [](GridSpec s) {
    try {
      generate_grid(s);
      FAIL("expected invalid spec");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidSpec);
    }
  };
  GridSpec s;
  s.n = 0;
  expect_invalid(s);
  s = {};
  s.trip = {10, 5};
  expect_invalid(s);
  s = {};
  s.delay = {0, 5};
  expect_invalid(s);
  s = {};
  s.headway = {-1, 5};
  expect_invalid(s);
  s = {};
  s.horizon = 0;
  expect_invalid(s);
}

TEST_CASE("generated grids are consistent and deterministic") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GridSpec s;
    s.n = 4;
    s.seed = seed;
    const auto net = generate_grid(s);
    CHECK(validate_consistency(net).consistent());
    CHECK(net.acyclic());
    if (seed <= 5) CHECK(net == generate_grid(s));
  }
  GridSpec a;
  a.seed = 1;
  GridSpec b;
  b.seed = 2;
  CHECK_FALSE(generate_grid(a) == generate_grid(b));
}

TEST_CASE("grid path counts match the binomial formula") {
  for (int n = 1; n <= 5; ++n) {
    GridSpec s;
    s.n = n;
    const auto net = generate_grid(s);
    CHECK(dfs_paths(net, 0, net.node_count() - 1) == binomial(2 * n - 2, n - 1));
  }
}

TEST_CASE("network documents") {
  SUBCASE("hand-written document") {
    const char* doc = R"({
      "nodes": ["home", "work"],
      "comment": "unknown fields are ignored",
      "edges": [{"from": "home", "to": "work", "kind": "bus", "colour": "red",
                 "buses": [{"d": 0, "M": 12.5, "lambda": 3}, {"d": 20, "M": 31, "lambda": 4}],
                 "walk": {"M": 95, "lambda": 8}}]
    })";
    const auto loaded = load_network(doc);
    CHECK(loaded.warnings.consistent());
    const auto& net = loaded.network;
    REQUIRE(net.node_count() == 2);
    REQUIRE(net.edge_count() == 1);
    const auto& s = net.edge(0).buses();
    REQUIRE(s.buses.size() == 2);
    CHECK(s.buses[0] == Bus{0, 12.5, 3});
    CHECK(s.buses[1] == Bus{20, 31, 4});
    CHECK(s.walk == Walk{95, 8});
  }

  SUBCASE("round trip is bit exact") {
    GridSpec spec;
    spec.n = 4;
    spec.seed = 99;
    const auto net = generate_grid(spec);
    const auto text = save_network(net);
    const auto back = load_network(text).network;
    CHECK(back == net);
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
      const auto& x = net.edge(e).buses().buses;
      const auto& y = back.edge(e).buses().buses;
      for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(std::memcmp(&x[k], &y[k], sizeof(Bus)) == 0);
      }
    }
    CHECK(save_network(back) == text);
  }

  SUBCASE("constant edges and integer node ids") {
    const auto loaded =
        load_network(R"({"nodes": [1, 2], "edges": [{"from": 1, "to": 2, "kind": "constant", "duration": 7}]})");
    CHECK(loaded.network.name(0) == "1");
    CHECK(loaded.network.edge(0).duration() == 7.0);
  }

  SUBCASE("consistency problems are warnings") {
    const auto loaded = load_network(
        R"({"nodes": ["a", "b"], "edges": [{"from": "a", "to": "b", "kind": "bus",
            "buses": [{"d": 0, "M": 10, "lambda": 5}, {"d": 30, "M": 35, "lambda": 3}],
            "walk": {"M": 100, "lambda": 20}}]})");
    CHECK_FALSE(loaded.warnings.consistent());
    CHECK_FALSE(loaded.network.consistent());
  }

  auto parse_error = [](const char* doc) -> std::string {
    try {
      load_network(doc);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
      return e.what();
    }
    FAIL("expected a parse error");
    return {};
  };

  SUBCASE("missing endpoint names the edge") {
    const auto msg = parse_error(
        R"({"nodes": ["a"], "edges": [{"from": "a", "to": "b", "kind": "constant", "duration": 1}]})");
    CHECK(msg.find("edges[0].to") != std::string::npos);
    CHECK(msg.find("'b'") != std::string::npos);
  }
  SUBCASE("syntax errors report a line") {
    const auto msg = parse_error("{\n\"nodes\": [\n\"a\",,\n]}");
    CHECK(msg.find("line 3") != std::string::npos);
  }
  SUBCASE("missing fields are named") {
    const auto msg = parse_error(
        R"({"nodes": ["a", "b"], "edges": [{"from": "a", "to": "b", "kind": "bus",
            "buses": [{"d": 0, "lambda": 5}], "walk": {"M": 100, "lambda": 20}}]})");
    CHECK(msg.find("edges[0].buses[0]") != std::string::npos);
    CHECK(msg.find("'M'") != std::string::npos);
  }
  SUBCASE("overlapping parallel bus edges are rejected") {
    const auto msg = parse_error(
        R"({"nodes": ["a", "b"], "edges": [
            {"from": "a", "to": "b", "kind": "bus", "buses": [{"d": 0, "M": 5, "lambda": 1}, {"d": 20, "M": 25, "lambda": 1}], "walk": {"M": 90, "lambda": 3}},
            {"from": "a", "to": "b", "kind": "bus", "buses": [{"d": 10, "M": 15, "lambda": 1}], "walk": {"M": 90, "lambda": 3}}]})");
    CHECK(msg.find("edges[1]") != std::string::npos);
  }
  SUBCASE("disjoint parallel edges are fine") {
    const auto loaded = load_network(
        R"({"nodes": ["a", "b"], "edges": [
            {"from": "a", "to": "b", "kind": "bus", "buses": [{"d": 0, "M": 5, "lambda": 1}], "walk": {"M": 90, "lambda": 3}},
            {"from": "a", "to": "b", "kind": "bus", "buses": [{"d": 10, "M": 15, "lambda": 1}], "walk": {"M": 90, "lambda": 3}},
            {"from": "a", "to": "b", "kind": "constant", "duration": 40}]})");
    CHECK(loaded.network.edge_count() == 3);
  }
}
