#pragma once

// JSON network documents:
//
//   {"nodes": ["a", "b", ...],
//    "edges": [{"from": "a", "to": "b", "kind": "bus",
//               "buses": [{"d": 0, "M": 10, "lambda": 5}, ...],
//               "walk": {"M": 90, "lambda": 10}},
//              {"from": "b", "to": "c", "kind": "constant", "duration": 7}]}
//
// Unknown fields are ignored. Numbers round-trip bit for bit.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tdsp/network.hpp"

namespace tdsp {

struct LoadedNetwork {
  Network network;
  /// Consistency problems are warnings; the network is still returned.
  ValidationReport warnings;
};

nlohmann::json network_to_json(const Network& net);
std::string save_network(const Network& net);

/// Throws Error(ParseError) naming the offending line or field. Parallel bus
/// edges with overlapping schedules are rejected.
LoadedNetwork load_network(std::string_view document);

void save_network_file(const Network& net, const std::filesystem::path& path);
LoadedNetwork load_network_file(const std::filesystem::path& path);

}  // namespace tdsp
