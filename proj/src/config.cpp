#include "beamblow/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "beamblow/errors.hpp"

namespace beamblow {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v, int line) {
  v = trim(v);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty() || !std::isfinite(out))
    throw ParseError(std::string(key), line, "expected a finite number, got '" + std::string(v) + "'");
  return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v, int line) {
  v = trim(v);
  Int out{};
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty())
    throw ParseError(std::string(key), line, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(trim(v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

struct Violation {
  std::string key;
  std::string message;
};

std::optional<Violation> check(const RunConfig& c) {
  if (c.dim != 1 && c.dim != 2) return Violation{"dim", "must be 1 or 2"};
  if (c.N < 1) return Violation{"N", "must be at least 1"};
  if (!(c.extent > 0.0)) return Violation{"extent", "must be positive"};
  if (!(c.p > 1.0)) return Violation{"p", "must exceed 1"};
  if (!(c.gamma >= 0.0)) return Violation{"gamma", "must be nonnegative"};
  if (!(2.0 * c.gamma + 1.0 <= c.p)) return Violation{"gamma", "need 2 gamma + 1 <= p"};
  if (!(c.r >= 1.0 && c.r < c.p)) return Violation{"r", "need 1 <= r < p"};
  if (!(c.beta >= 0.0)) return Violation{"beta", "must be nonnegative"};
  if (c.preset != "sine_bump" && c.preset != "negative_energy" && c.preset != "high_energy")
    return Violation{"preset", "unknown preset '" + c.preset + "'"};
  if (c.amplitude && !(*c.amplitude >= 0.0)) return Violation{"amplitude", "must be nonnegative"};
  if (!(c.dt_max > 0.0)) return Violation{"dt_max", "must be positive"};
  if (c.dt_min && !(*c.dt_min > 0.0 && *c.dt_min < c.dt_max))
    return Violation{"dt_min", "need 0 < dt_min < dt_max"};
  if (!(c.t_max > 0.0)) return Violation{"t_max", "must be positive"};
  if (!(c.blow_threshold > 0.0)) return Violation{"blow_threshold", "must be positive"};
  if (c.output_every < 1) return Violation{"output_every", "must be at least 1"};
  if (c.thresholds.size() < 3) return Violation{"thresholds", "need at least three values"};
  for (std::size_t k = 0; k < c.thresholds.size(); ++k) {
    if (!(c.thresholds[k] > 0.0)) return Violation{"thresholds", "values must be positive"};
    if (k > 0 && !(c.thresholds[k] > c.thresholds[k - 1]))
      return Violation{"thresholds", "values must be strictly ascending"};
  }
  if (!(c.mu > 0.0)) return Violation{"mu", "must be positive"};
  if (c.alpha_override && !(*c.alpha_override > 0.0 && *c.alpha_override < 0.5))
    return Violation{"alpha_override", "must lie in (0, 1/2)"};
  if (c.eps_override && !(*c.eps_override > 0.0)) return Violation{"eps_override", "must be positive"};
  if (!(c.M_safety >= 1.0)) return Violation{"M_safety", "must be at least 1"};
  return std::nullopt;
}

struct Line {
  std::string key;
  std::string value;
  int number = 0;
};

std::vector<Line> lex(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) throw ParseError("", number, "expected 'key = value'");
    const std::string_view key = trim(raw.substr(0, eq));
    const std::string_view value = trim(raw.substr(eq + 1));
    if (key.empty()) throw ParseError("", number, "missing key");
    for (const Line& l : out)
      if (l.key == key) throw ParseError(std::string(key), number, "duplicate key");
    out.push_back({std::string(key), std::string(value), number});
  }
  return out;
}

RunConfig build(const std::vector<Line>& lines) {
  RunConfig c;
  for (const Line& l : lines) set_key(c, l.key, l.value, l.number);
  if (const auto v = check(c)) {
    int line = 0;
    for (const Line& l : lines)
      if (l.key == v->key) line = l.number;
    throw ParseError(v->key, line, v->message);
  }
  return c;
}

}  // namespace

StepControls RunConfig::step_controls() const {
  StepControls s;
  s.dt_max = dt_max;
  s.dt_min = dt_min.value_or(0.0);
  return s;
}

EmbeddingOptions RunConfig::embedding_options() const {
  EmbeddingOptions e;
  e.seed = seed;
  return e;
}

void set_key(RunConfig& c, std::string_view key, std::string_view value, int line) {
  const auto num = [&] { return to_double(key, value, line); };
  const std::string k(key);
  if (k == "dim") c.dim = to_int<int>(key, value, line);
  else if (k == "N") c.N = to_int<int>(key, value, line);
  else if (k == "extent") c.extent = num();
  else if (k == "p") c.p = num();
  else if (k == "r") c.r = num();
  else if (k == "gamma") c.gamma = num();
  else if (k == "beta") c.beta = num();
  else if (k == "preset") c.preset = std::string(trim(value));
  else if (k == "amplitude") c.amplitude = num();
  else if (k == "energy_R") c.energy_R = num();
  else if (k == "seed") c.seed = to_int<std::uint64_t>(key, value, line);
  else if (k == "dt_max") c.dt_max = num();
  else if (k == "dt_min") c.dt_min = num();
  else if (k == "t_max") c.t_max = num();
  else if (k == "blow_threshold") c.blow_threshold = num();
  else if (k == "output_every") c.output_every = to_int<int>(key, value, line);
  else if (k == "thresholds") {
    c.thresholds.clear();
    for (std::string_view item : split_list(value)) c.thresholds.push_back(to_double(key, item, line));
  } else if (k == "mu") c.mu = num();
  else if (k == "alpha_override") c.alpha_override = num();
  else if (k == "eps_override") c.eps_override = num();
  else if (k == "M_safety") c.M_safety = num();
  else throw ParseError(k, line, "unknown key");
}

void validate(const RunConfig& config) {
  if (const auto v = check(config)) throw ParseError(v->key, 0, v->message);
}

RunConfig parse_config(std::string_view text) {
  const std::vector<Line> lines = lex(text);
  for (const Line& l : lines)
    if (l.key.rfind("sweep.", 0) == 0)
      throw ParseError(l.key, l.number, "sweep axes are only accepted by the sweep command");
  return build(lines);
}

std::size_t SweepConfig::size() const {
  std::size_t n = 1;
  for (const auto& [key, values] : axes) n *= values.size();
  return n;
}

SweepConfig parse_sweep_config(std::string_view text, std::size_t cap) {
  std::vector<Line> base_lines;
  std::vector<Line> axis_lines;
  for (Line& l : lex(text)) {
    if (l.key.rfind("sweep.", 0) == 0) {
      l.key = l.key.substr(6);
      axis_lines.push_back(std::move(l));
    } else {
      base_lines.push_back(std::move(l));
    }
  }
  SweepConfig s;
  s.cap = cap;
  s.base = build(base_lines);
  std::sort(axis_lines.begin(), axis_lines.end(),
            [](const Line& a, const Line& b) { return a.key < b.key; });
  std::size_t total = 1;
  for (const Line& l : axis_lines) {
    std::vector<std::string> values;
    for (std::string_view item : split_list(l.value)) {
      if (item.empty()) throw ParseError("sweep." + l.key, l.number, "empty axis value");
      RunConfig probe = s.base;
      set_key(probe, l.key, item, l.number);
      values.emplace_back(item);
    }
    total *= values.size();
    if (total > cap)
      throw ParseError("sweep." + l.key, l.number,
                       "sweep has more than " + std::to_string(cap) + " combinations");
    s.axes.emplace_back(l.key, std::move(values));
  }
  return s;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  const auto put = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  put("dim", std::to_string(c.dim));
  put("N", std::to_string(c.N));
  put("extent", format_double(c.extent));
  put("p", format_double(c.p));
  put("r", format_double(c.r));
  put("gamma", format_double(c.gamma));
  put("beta", format_double(c.beta));
  put("preset", c.preset);
  if (c.amplitude) put("amplitude", format_double(*c.amplitude));
  if (c.energy_R) put("energy_R", format_double(*c.energy_R));
  put("seed", std::to_string(c.seed));
  put("dt_max", format_double(c.dt_max));
  if (c.dt_min) put("dt_min", format_double(*c.dt_min));
  put("t_max", format_double(c.t_max));
  put("blow_threshold", format_double(c.blow_threshold));
  put("output_every", std::to_string(c.output_every));
  std::string list;
  for (std::size_t k = 0; k < c.thresholds.size(); ++k)
    list += (k ? ", " : "") + format_double(c.thresholds[k]);
  put("thresholds", list);
  put("mu", format_double(c.mu));
  if (c.alpha_override) put("alpha_override", format_double(*c.alpha_override));
  if (c.eps_override) put("eps_override", format_double(*c.eps_override));
  put("M_safety", format_double(c.M_safety));
  return out.str();
}

}  // namespace beamblow
