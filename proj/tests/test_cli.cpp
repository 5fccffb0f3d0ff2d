#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdsp/cli.hpp"
#include "tdsp/experiments.hpp"
#include "tdsp/grid.hpp"
#include "tdsp/network_io.hpp"
#include "tdsp/open_loop.hpp"

using namespace tdsp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tdsp_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
            std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: grid then validate") {
  TempDir dir;
  const auto g = dir.file("g.json");
  auto r = cli({"grid", "--n", "4", "--seed", "3", "--output", g});
  CHECK(r.status == kExitOk);
  r = cli({"validate", "--network", g});
  CHECK(r.status == kExitOk);
  CHECK(r.out == "consistent\n");

  GridSpec s;
  s.n = 4;
  s.seed = 3;
  CHECK(load_network_file(g).network == generate_grid(s));
}

TEST_CASE("cli: validate reports the offending pair") {
  TempDir dir;
  const auto path = dir.file("bad.json");
  std::ofstream(path) << R"({"nodes": ["a", "b"], "edges": [{"from": "a", "to": "b", "kind": "bus",
    "buses": [{"d": 0, "M": 10, "lambda": 5}, {"d": 30, "M": 35, "lambda": 3}],
    "walk": {"M": 100, "lambda": 20}}]})";
  const auto r = cli({"validate", "--network", path});
  CHECK(r.status == kExitDomainError);
  CHECK(r.out.starts_with("inconsistent\n"));
  CHECK(r.out.find("bus 0 and bus 1") != std::string::npos);
}

TEST_CASE("cli: plan matches the library") {
  TempDir dir;
  const auto g = dir.file("g.json");
  REQUIRE(cli({"grid", "--n", "10", "--seed", "1", "--output", g}).status == 0);
  const auto r = cli({"plan", "--network", g, "--origin", "0,0", "--dest", "9,9", "--start", "0",
                      "--utility", "deadline:450", "--algorithm", "dominance"});
  REQUIRE(r.status == kExitOk);

  const auto net = load_network_file(g).network;
  const auto lib = pfs_dominance(net, net.id("0,0"), 0, net.id("9,9"), Utility::deadline(450));
  std::string path;
  for (std::size_t k = 0; k < lib.best.path.size(); ++k) {
    path += (k ? " -> " : "") + net.name(lib.best.path[k]);
  }
  CHECK(r.out.find("path: " + path + "\n") != std::string::npos);
  CHECK(r.out.find("probability: " + format_number(lib.best.priority) + "\n") != std::string::npos);
  CHECK(r.out.find("labels generated: " + std::to_string(lib.stats.generated)) != std::string::npos);

  const auto ev = cli({"plan", "--network", g, "--origin", "0,0", "--dest", "9,9", "--utility",
                       "linear", "--algorithm", "expected-value"});
  CHECK(ev.status == kExitOk);
  CHECK(ev.out.find("expected utility: ") != std::string::npos);
}

TEST_CASE("cli: usage and domain errors") {
  CHECK(cli({}).status == kExitUsage);
  CHECK(cli({"frobnicate"}).status == kExitUsage);
  const auto unknown = cli({"validate", "--network", "x.json", "--bogus"});
  CHECK(unknown.status == kExitUsage);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(cli({"plan", "--network", "x.json"}).status == kExitUsage);
  CHECK(cli({"sweep", "--sizes", "two"}).status == kExitUsage);
  CHECK(cli({"grid", "--trip", "5"}).status == kExitUsage);
  CHECK(cli({"plan", "--network", "x.json", "--origin", "a", "--dest", "b", "--utility",
             "deadline:5", "--algorithm", "magic"})
            .status == kExitUsage);
  CHECK(cli({"--help"}).status == kExitOk);

  TempDir dir;
  const auto path = dir.file("split.json");
  std::ofstream(path) << R"({"nodes": ["a", "b", "c"],
    "edges": [{"from": "a", "to": "b", "kind": "constant", "duration": 4}]})";
  const auto unreachable = cli({"plan", "--network", path, "--origin", "a", "--dest", "c",
                                "--utility", "deadline:10"});
  CHECK(unreachable.status == kExitDomainError);
  CHECK(unreachable.err.find("unreachable-destination") != std::string::npos);
  CHECK(cli({"plan", "--network", path, "--origin", "a", "--dest", "zz", "--utility",
             "deadline:10"})
            .status == kExitDomainError);
  CHECK(cli({"plan", "--network", path, "--origin", "a", "--dest", "b", "--utility", "cubic"})
            .status == kExitDomainError);
  CHECK(cli({"validate", "--network", dir.file("missing.json")}).status == kExitDomainError);
  CHECK(cli({"grid", "--n", "3", "--headway", "-1,4"}).status == kExitDomainError);
}

TEST_CASE("cli: scenario") {
  const auto r = cli({"scenario", "--train", "13:45", "--train", "13:25"});
  CHECK(r.status == kExitOk);
  CHECK(r.out ==
        "train 13:45: taxi 0.7, bus 1, take the bus\n"
        "train 13:25: taxi 0.3, bus 0, take the taxi\n");
  CHECK(cli({"scenario", "--train", "1345"}).status == kExitDomainError);
}

TEST_CASE("cli: sweep is reproducible and honours the seed sources") {
  TempDir dir;
  const std::vector<std::string> base{"sweep", "--sizes", "2..6", "--seeds-per-size", "2",
                                      "--no-timing"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return cli(args);
  };
  const auto a = with({"--seed", "7"});
  const auto b = with({"--seed", "7"});
  REQUIRE(a.status == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.starts_with("n,seed,generated,expanded,baseline,ms\n"));
  CHECK(a.out.find("\n2,7,") != std::string::npos);
  CHECK(a.out.find("\n2,8,") != std::string::npos);

  ::setenv(kSeedEnvVar, "7", 1);
  CHECK(with({}).out == a.out);
  ::setenv(kSeedEnvVar, "9", 1);
  CHECK(with({"--seed", "7"}).out == a.out);  // the flag wins
  CHECK(with({}).out != a.out);
  ::setenv(kSeedEnvVar, "nine", 1);
  CHECK(with({}).status == kExitUsage);
  ::unsetenv(kSeedEnvVar);

  const auto file = dir.file("sweep.csv");
  CHECK(with({"--seed", "7", "--output", file}).status == kExitOk);
  CHECK(slurp(file) == a.out);
}

TEST_CASE("cli: curve and policy outputs") {
  TempDir dir;
  const auto csv = dir.file("curve.csv");
  const auto r = cli({"curve", "--n", "5", "--seed", "2", "--deadlines", "100:130:10",
                      "--output", csv});
  REQUIRE(r.status == kExitOk);
  const auto text = slurp(csv);
  CHECK(text.starts_with("deadline,adaptive,dominance,expected_value\n100,"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);

  const auto g = dir.file("g.json");
  REQUIRE(cli({"grid", "--n", "3", "--output", g}).status == 0);
  const auto p = cli({"policy", "--network", g, "--dest", "2,2", "--utility", "deadline:120"});
  REQUIRE(p.status == kExitOk);
  const auto doc = nlohmann::json::parse(p.out);
  CHECK(doc["dest"] == "2,2");
  CHECK(doc["nodes"].size() == 9);
  const auto v = cli({"policy", "--network", g, "--dest", "2,2", "--utility", "deadline:120",
                      "--origin", "0,0", "--start", "0"});
  CHECK(v.out.starts_with("value: "));
  CHECK(cli({"policy", "--network", g, "--dest", "2,2", "--utility", "linear"}).status ==
        kExitDomainError);

  const auto h = cli({"hybrid", "--network", g, "--origin", "0,0", "--dest", "2,2", "--utility",
                      "deadline:120", "--adaptive", "1,1"});
  CHECK(h.status == kExitOk);
  CHECK(h.out.find("expected utility: ") != std::string::npos);
  CHECK(h.out.find("decisions at 1,1: ") != std::string::npos);
}
