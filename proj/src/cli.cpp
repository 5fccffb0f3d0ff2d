#include "tdsp/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tdsp/adaptive.hpp"
#include "tdsp/errors.hpp"
#include "tdsp/experiments.hpp"
#include "tdsp/grid.hpp"
#include "tdsp/network_io.hpp"
#include "tdsp/open_loop.hpp"

namespace tdsp {

namespace {

/// Usage problems detected after CLI11 accepted the flags.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const char* what) {
  double x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError(std::string(what) + ": '" + text + "' is not a number");
  }
  return x;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

Range parse_range(const std::string& text, const char* what) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError(std::string(what) + ": expected lo,hi");
  return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

/// "2..12", "2,4,8" or a single size.
std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  auto to_int = [](const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw UsageError("--sizes: '" + s + "' is not an integer");
    }
    return v;
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    if (hi < lo) throw UsageError("--sizes: empty range " + text);
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(to_int(part));
  return out;
}

/// "lo:hi:step" deadlines, inclusive of hi.
std::vector<Time> parse_deadlines(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("--deadlines: expected lo:hi:step");
  const double lo = parse_number(parts[0], "--deadlines");
  const double hi = parse_number(parts[1], "--deadlines");
  const double step = parse_number(parts[2], "--deadlines");
  if (!(step > 0) || hi < lo) throw UsageError("--deadlines: need step > 0 and lo <= hi");
  std::vector<Time> out;
  for (std::size_t k = 0;; ++k) {
    const double t = lo + step * static_cast<double>(k);
    if (t > hi + 1e-9 * step) break;
    out.push_back(t);
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
    throw UsageError(std::string(kSeedEnvVar) + " must be an unsigned integer");
  }
  return 1;
}

std::string path_text(const Network& net, const std::vector<NodeId>& path) {
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k) s += " -> ";
    s += net.name(path[k]);
  }
  return s;
}

/// Grid flags shared by every subcommand that generates a grid.
struct GridFlags {
  std::string preset = "default";
  int n = 0;  // 0 keeps the preset's size
  std::string trip, delay, headway;
  std::optional<double> horizon, walk_offset, walk_factor;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app, bool with_size) {
    app->add_option("--preset", preset, "Parameter preset: default or curve")
        ->check(CLI::IsMember({"default", "curve"}));
    if (with_size) app->add_option("--n", n, "Grid side length")->check(CLI::PositiveNumber);
    app->add_option("--trip", trip, "Minimum trip time range lo,hi");
    app->add_option("--delay", delay, "Mean delay range lo,hi");
    app->add_option("--headway", headway, "Departure interval range lo,hi");
    app->add_option("--horizon", horizon, "Last departure time");
    app->add_option("--walk-offset", walk_offset, "Walk start after the last bus");
    app->add_option("--walk-factor", walk_factor, "Walk delay as a multiple of the bus delay");
    app->add_option("--seed", seed, std::string("Random seed (default $") + kSeedEnvVar + " or 1)");
  }

  GridSpec spec() const {
    GridSpec s = preset == "curve" ? curve_grid_spec() : GridSpec{};
    if (n > 0) s.n = n;
    if (!trip.empty()) s.trip = parse_range(trip, "--trip");
    if (!delay.empty()) s.delay = parse_range(delay, "--delay");
    if (!headway.empty()) s.headway = parse_range(headway, "--headway");
    if (horizon) s.horizon = *horizon;
    if (walk_offset) s.walk_offset = *walk_offset;
    if (walk_factor) s.walk_delay_factor = *walk_factor;
    s.seed = seed ? *seed : default_seed();
    return s;
  }
};

class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

Network load(const std::string& path, std::ostream& err) {
  auto loaded = load_network_file(path);
  for (const auto& v : loaded.warnings.violations) err << "warning: " << v.message << '\n';
  return std::move(loaded.network);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Route planning on timetabled networks with uncertain travel times", "tdsp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // plan
  std::string network_path, origin, dest, utility_text, algorithm = "dominance";
  double start = 0;
  auto* plan = app.add_subcommand("plan", "Best open-loop path");
  plan->add_option("--network", network_path, "Network JSON file")->required();
  plan->add_option("--origin", origin, "Origin node name")->required();
  plan->add_option("--dest", dest, "Destination node name")->required();
  plan->add_option("--start", start, "Departure time in minutes");
  plan->add_option("--utility", utility_text, "deadline:T, linear or step:b0,b1:v0,v1,v2")
      ->required();
  plan->add_option("--algorithm", algorithm, "dominance, expected-value or exhaustive")
      ->check(CLI::IsMember({"dominance", "expected-value", "exhaustive"}));

  // policy
  std::string policy_out;
  std::optional<std::string> policy_origin;
  auto* policy = app.add_subcommand("policy", "Adaptive policy for every node");
  policy->add_option("--network", network_path, "Network JSON file")->required();
  policy->add_option("--dest", dest, "Destination node name")->required();
  policy->add_option("--utility", utility_text, "deadline:T or step:...")->required();
  policy->add_option("--origin", policy_origin, "Report the value at this node");
  policy->add_option("--start", start, "Arrival time at --origin");
  policy->add_option("--output", policy_out, "Write the policy JSON here");

  // hybrid
  std::vector<std::string> adaptive_names;
  auto* hybrid = app.add_subcommand("hybrid", "Open-loop segments between adaptive nodes");
  hybrid->add_option("--network", network_path, "Network JSON file")->required();
  hybrid->add_option("--origin", origin, "Origin node name")->required();
  hybrid->add_option("--dest", dest, "Destination node name")->required();
  hybrid->add_option("--start", start, "Departure time in minutes");
  hybrid->add_option("--utility", utility_text, "deadline:T or step:...")->required();
  hybrid->add_option("--adaptive", adaptive_names, "Adaptive node (repeatable)");

  // grid
  GridFlags grid_flags;
  std::string grid_out;
  auto* grid = app.add_subcommand("grid", "Generate a random bus grid");
  grid_flags.add(grid, true);
  grid->add_option("--output", grid_out, "Network JSON file (default stdout)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check stochastic consistency");
  validate->add_option("--network", network_path, "Network JSON file")->required();

  // sweep
  GridFlags sweep_flags;
  std::string sizes_text = "2..12", sweep_out;
  int seeds_per_size = 1;
  double deadline_factor = 1.5;
  bool unpruned = false, no_timing = false;
  int unpruned_max_n = 6;
  std::size_t label_cap = 1'000'000;
  auto* sweep = app.add_subcommand("sweep", "Label counts across grid sizes");
  sweep_flags.add(sweep, false);
  sweep->add_option("--sizes", sizes_text, "Sizes as lo..hi or a comma list");
  sweep->add_option("--seeds-per-size", seeds_per_size, "Grids per size, seeds from --seed")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--deadline-factor", deadline_factor,
                    "Deadline as a multiple of the expected traversal time");
  sweep->add_flag("--unpruned", unpruned, "Also search without pruning");
  sweep->add_option("--unpruned-max-n", unpruned_max_n, "Largest size searched without pruning");
  sweep->add_option("--label-cap", label_cap, "Label cap for the unpruned search");
  sweep->add_flag("--no-timing", no_timing, "Write 0 in the ms column");
  sweep->add_option("--output", sweep_out, "CSV file (default stdout)");

  // curve
  GridFlags curve_flags;
  curve_flags.preset = "curve";
  std::string curve_network, deadlines_text, curve_out;
  std::optional<std::string> curve_origin, curve_dest;
  auto* curve = app.add_subcommand("curve", "Deadline probability curves");
  curve_flags.add(curve, true);
  curve->add_option("--network", curve_network, "Network JSON file instead of a generated grid");
  curve->add_option("--origin", curve_origin, "Origin node (default lower-left corner)");
  curve->add_option("--dest", curve_dest, "Destination node (default upper-right corner)");
  curve->add_option("--start", start, "Departure time in minutes");
  curve->add_option("--deadlines", deadlines_text,
                    "lo:hi:step; omitted means 101 one-minute deadlines, auto-calibrated");
  curve->add_option("--output", curve_out, "CSV file (default stdout)");

  // scenario
  std::vector<std::string> trains;
  auto* scenario = app.add_subcommand("scenario", "Taxi or bus to make a train");
  scenario->add_option("--train", trains, "Train departure hh:mm (repeatable)")->required();

  std::vector<const char*> argv{"tdsp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (*plan) {
      const auto net = load(network_path, err);
      const auto u = Utility::parse(utility_text);
      const NodeId o = net.id(origin);
      const NodeId d = net.id(dest);
      PathLabel best{{o}, {}, ArrivalMixture::point(start), 0.0};
      std::optional<SearchStats> stats;
      std::size_t paths = 0;
      if (algorithm == "dominance") {
        auto r = pfs_dominance(net, o, start, d, u);
        best = std::move(r.best);
        stats = r.stats;
      } else if (algorithm == "expected-value") {
        auto r = expected_value_search(net, o, start, d, u);
        best = std::move(r.best);
        stats = r.stats;
      } else {
        auto r = enumerate_paths(net, o, start, d, u);
        best = std::move(r.best);
        paths = r.paths.size();
      }
      out << "path: " << path_text(net, best.path) << '\n';
      out << (u.kind() == Utility::Kind::Deadline ? "probability: " : "expected utility: ")
          << format_number(best.priority) << '\n';
      out << "mean arrival: " << format_number(mean(best.cost)) << '\n';
      if (stats) {
        out << "labels generated: " << stats->generated << '\n';
        out << "labels expanded: " << stats->expanded << '\n';
      } else {
        out << "paths enumerated: " << paths << '\n';
      }
    } else if (*policy) {
      const auto net = load(network_path, err);
      const auto u = Utility::parse(utility_text);
      const auto p = adaptive_path(net, net.id(dest), u);
      if (policy_origin) {
        out << "value: " << format_number(evaluate_policy(p, net.id(*policy_origin), start))
            << '\n';
      }
      if (!policy_out.empty() || !policy_origin) {
        OutputTarget target(policy_out, out);
        target.stream() << policy_to_json(p, net).dump(2) << '\n';
      }
    } else if (*hybrid) {
      const auto net = load(network_path, err);
      const auto u = Utility::parse(utility_text);
      std::vector<NodeId> adaptive;
      for (const auto& name : adaptive_names) adaptive.push_back(net.id(name));
      const auto h = hybrid_plan(net, adaptive, net.id(origin), start, net.id(dest), u);
      out << "first segment: " << path_text(net, h.first_segment.path) << '\n';
      out << "expected utility: " << format_number(h.expected_utility) << '\n';
      for (NodeId n : adaptive) {
        out << "decisions at " << net.name(n) << ": " << h.decisions[n].size() << '\n';
      }
    } else if (*grid) {
      const auto net = generate_grid(grid_flags.spec());
      if (grid_out.empty()) {
        out << save_network(net) << '\n';
      } else {
        save_network_file(net, grid_out);
        out << "wrote " << net.node_count() << " nodes and " << net.edge_count() << " edges to "
            << grid_out << '\n';
      }
    } else if (*validate) {
      const auto loaded = load_network_file(network_path);
      if (loaded.warnings.consistent()) {
        out << "consistent\n";
      } else {
        out << "inconsistent\n";
        for (const auto& v : loaded.warnings.violations) out << v.message << '\n';
        return kExitDomainError;
      }
    } else if (*sweep) {
      SweepOptions options;
      options.sizes = parse_sizes(sizes_text);
      options.base = sweep_flags.spec();
      options.seeds.clear();
      for (int k = 0; k < seeds_per_size; ++k) {
        options.seeds.push_back(options.base.seed + static_cast<std::uint64_t>(k));
      }
      options.deadline_factor = deadline_factor;
      options.run_unpruned = unpruned;
      options.unpruned_max_n = unpruned_max_n;
      options.label_cap = label_cap;
      options.record_timing = !no_timing;
      const auto result = run_grid_sweep(options);
      OutputTarget target(sweep_out, out);
      write_sweep_csv(result, target.stream());
      for (const auto& row : result.rows) {
        if (!row.error.empty()) err << "n=" << row.n << " seed=" << row.seed << ": " << row.error << '\n';
        if (!row.unpruned_error.empty()) {
          err << "n=" << row.n << " seed=" << row.seed << " unpruned: " << row.unpruned_error << '\n';
        }
      }
    } else if (*curve) {
      std::optional<Network> net;
      if (!curve_network.empty()) {
        net.emplace(load(curve_network, err));
      } else {
        net.emplace(generate_grid(curve_flags.spec()));
      }
      const NodeId o = curve_origin ? net->id(*curve_origin) : 0;
      const NodeId d = curve_dest ? net->id(*curve_dest) : net->node_count() - 1;
      std::vector<Time> deadlines;
      if (!deadlines_text.empty()) {
        deadlines = parse_deadlines(deadlines_text);
      } else {
        CalibrationOptions cal;
        cal.preferred_first = 150;
        const auto range = calibrate_deadlines(*net, o, start, d, cal);
        err << "deadlines " << format_number(range.first) << " to "
            << format_number(range.deadlines().back()) << " step " << format_number(range.step)
            << '\n';
        deadlines = range.deadlines();
      }
      const auto result = run_deadline_curve(*net, o, start, d, deadlines);
      OutputTarget target(curve_out, out);
      write_curve_csv(result, target.stream());
    } else if (*scenario) {
      for (const auto& train : trains) {
        const auto r = windsor_scenario(parse_clock(train));
        out << "train " << format_clock(r.train_departure) << ": taxi "
            << format_number(r.taxi_catch) << ", bus " << format_number(r.bus_catch)
            << ", take the " << to_string(r.recommended) << '\n';
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace tdsp
