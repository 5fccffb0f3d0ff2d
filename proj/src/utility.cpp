#include "tdsp/utility.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tdsp/errors.hpp"

namespace tdsp {

namespace {

[[noreturn]] void unsupported(const std::string& why) {
  throw Error(ErrorKind::UnsupportedUtility, why);
}

double parse_number(std::string_view s, std::string_view context) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    unsupported("cannot read number '" + std::string(s) + "' in utility " + std::string(context));
  }
  return v;
}

std::vector<double> parse_list(std::string_view s, std::string_view context) {
  std::vector<double> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(parse_number(s.substr(0, comma), context));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Utility Utility::deadline(Time t) {
  if (!std::isfinite(t)) unsupported("deadline must be finite");
  return Utility(Kind::Deadline, {t}, {1.0, 0.0});
}

Utility Utility::linear() { return Utility(Kind::Linear, {}, {}); }

Utility Utility::step(std::vector<Time> breakpoints, std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1) {
    unsupported("step utility needs exactly one more value than breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i])) unsupported("step breakpoints must be finite");
    if (i > 0 && !(breakpoints[i - 1] < breakpoints[i])) {
      unsupported("step breakpoints must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) unsupported("step values must be finite");
    if (i > 0 && values[i] > values[i - 1]) {
      unsupported("step utility must be nonincreasing in arrival time");
    }
  }
  return Utility(Kind::Step, std::move(breakpoints), std::move(values));
}

Utility Utility::parse(std::string_view text) {
  if (text == "linear") return linear();
  if (text.starts_with("deadline:")) {
    return deadline(parse_number(text.substr(9), text));
  }
  if (text.starts_with("step:")) {
    auto rest = text.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) unsupported("step utility is 'step:b0,b1,...:v0,v1,...'");
    return step(parse_list(rest.substr(0, colon), text), parse_list(rest.substr(colon + 1), text));
  }
  unsupported("unsupported utility '" + std::string(text) +
              "' (expected deadline:T, linear, or step:breakpoints:values)");
}

double Utility::operator()(Time t) const {
  if (kind_ == Kind::Linear) return -t;
  // First breakpoint with t <= b_i selects v_i.
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

std::string Utility::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Deadline: os << "deadline:" << deadline_time(); break;
    case Kind::Linear: os << "linear"; break;
    case Kind::Step: {
      os << "step:";
      for (std::size_t i = 0; i < breakpoints_.size(); ++i) os << (i ? "," : "") << breakpoints_[i];
      os << ':';
      for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << values_[i];
      break;
    }
  }
  return os.str();
}

double expected_utility(const ArrivalMixture& c, const Utility& u) {
  switch (u.kind()) {
    case Utility::Kind::Deadline:
      return cdf(c, u.deadline_time());
    case Utility::Kind::Linear:
      return -mean(c);
    case Utility::Kind::Step:
      break;
  }
  const auto b = u.breakpoints();
  const auto v = u.values();
  double total = 0.0;
  for (const auto& comp : c.components()) {
    if (b.empty()) {
      total += comp.weight * v.back();
      continue;
    }
    // Mass of (b_{i-1}, b_i] is F(b_i) - F(b_{i-1}); evaluated per component so
    // point masses land in the right-closed step exactly.
    // Breakpoints before the support carry no mass.
    const auto first = std::lower_bound(b.begin(), b.end(), support_start(comp.dist));
    double prev = 0.0;
    double acc = 0.0;
    for (auto i = static_cast<std::size_t>(first - b.begin()); i < b.size(); ++i) {
      const double f = cdf(comp.dist, b[i]);
      acc += v[i] * (f - prev);
      prev = f;
    }
    acc += v.back() * survival(comp.dist, b.back());
    total += comp.weight * acc;
  }
  return total;
}

}  // namespace tdsp
