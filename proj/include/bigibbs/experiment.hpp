#pragma once

// Experiment configuration: a sectioned key=value text format (JSON accepted too), full
// validation with every problem reported at once, and a canonical echo that parses back
// to the same configuration.
//
//   # comment
//   dimension = 2
//   seed = 7
//   [window]
//   lower = 0, 0
//   upper = 1, 1
//   [potential.cross]
//   kind = step
//   amplitude = 1
//   range = 0.3

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bigibbs/analysis.hpp"
#include "bigibbs/config.hpp"
#include "bigibbs/energy.hpp"
#include "bigibbs/error.hpp"
#include "bigibbs/intensity.hpp"
#include "bigibbs/oracle.hpp"
#include "bigibbs/sampler.hpp"

namespace bigibbs {

struct ConfigIssue {
  enum class Kind { parse, validation };
  Kind kind = Kind::validation;
  // 1-based line of the text input; 0 when not tied to a line.
  std::size_t line = 0;
  std::string field;
  std::string message;

  std::string str() const {
    std::string s = kind == Kind::parse ? "ParseError" : "ValidationError";
    if (line != 0) {
      s += " line " + std::to_string(line);
    }
    if (!field.empty()) {
      s += " [" + field + "]";
    }
    return s + ": " + message;
  }
};

class ConfigError : public Error {
public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

  bool names(std::string_view field) const {
    return std::any_of(issues_.begin(), issues_.end(),
                       [&](const ConfigIssue& i) { return i.field == field; });
  }

private:
  static std::string join(const std::vector<ConfigIssue>& issues) {
    std::string s;
    for (const auto& i : issues) {
      s += (s.empty() ? "" : "\n") + i.str();
    }
    return s;
  }

  std::vector<ConfigIssue> issues_;
};

struct PotentialSpec {
  std::string kind = "none";
  double amplitude = 0.0;
  double range = 1.0;
  double exponent = 0.0;

  PairPotential build() const {
    if (kind == "none") {
      return PairPotential::none();
    }
    if (kind == "step") {
      return PairPotential::step(amplitude, range);
    }
    if (kind == "hardcore") {
      return PairPotential::hardcore(range);
    }
    if (kind == "soft-core-power") {
      return PairPotential::soft_core(amplitude, range, exponent);
    }
    throw InvalidArgument("unknown potential kind '" + kind + "'");
  }

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

struct SamplerSettings {
  std::uint64_t steps = 100000;
  // Filled from the model when absent.
  std::optional<std::uint64_t> burnin;
  std::uint64_t thin = kDefaultThin;
  std::uint64_t chains = 1;

  friend bool operator==(const SamplerSettings&, const SamplerSettings&) = default;
};

struct OracleSettings {
  int n_max = 6;
  std::uint64_t mc_per_term = 100000;
  std::uint64_t samples = 10000;

  friend bool operator==(const OracleSettings&, const OracleSettings&) = default;
};

struct VerifySettings {
  std::string h = "one";
  std::uint64_t sigma_points = 16;
  std::uint64_t ruelle_draws = 16;
  // Empty means the default half-window.
  std::optional<Window> subwindow;
  std::optional<Window> ruelle_plus;
  std::optional<Window> ruelle_minus;
  double radius = 0.2;
  double slope = 0.5;
  std::uint64_t identity_instances = 500;

  friend bool operator==(const VerifySettings&, const VerifySettings&) = default;
};

struct ExperimentConfig {
  std::size_t dimension = 2;
  Window window = Window::unit(2);
  double z = 1.0;
  std::string density = "constant";
  std::size_t density_grid = IntensityMeasure::kDefaultGrid;
  PotentialSpec cross, self_plus, self_minus;
  TwoComponentConfiguration boundary;
  std::uint64_t seed = 0;
  SamplerSettings sampler;
  OracleSettings oracle;
  VerifySettings verify;

  PotentialModel model() const {
    return {cross.build(), self_plus.build(), self_minus.build(),
            IntensityMeasure::preset(density, z, density_grid)};
  }

  ChainSpec chain_spec() const {
    ChainSpec spec{model(), window, sampler.steps, 0, sampler.thin, boundary, seed};
    spec.burnin = sampler.burnin ? *sampler.burnin : ChainSpec::default_burnin(spec.model, window);
    return spec;
  }

  TestFunctionParams test_params() const {
    return {verify.subwindow, verify.radius, verify.slope};
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string format_double(double v) {
  if (v == kInf) {
    return "inf";
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? ", " : "") + format_double(v[i]);
  }
  return s;
}

inline std::string format_points(const Configuration& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<double> coords(c[i].coords().begin(), c[i].coords().end());
    s += (i ? "; " : "") + format_list(coords);
  }
  return s;
}

// Collects issues while reading typed values out of a flat key -> value map.
class FieldReader {
public:
  FieldReader(std::map<std::string, std::pair<std::string, std::size_t>> values,
              std::vector<ConfigIssue>& issues)
      : values_(std::move(values)), issues_(issues) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> text(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) {
      return std::nullopt;
    }
    used_.insert(key);
    return it->second.first;
  }

  std::optional<double> real(const std::string& key) {
    auto t = text(key);
    if (!t) {
      return std::nullopt;
    }
    const auto v = parse_real(*t);
    if (!v) {
      parse_issue(key, "expected a number, got '" + *t + "'");
    }
    return v;
  }

  std::optional<std::uint64_t> integer(const std::string& key) {
    auto t = text(key);
    if (!t) {
      return std::nullopt;
    }
    std::uint64_t v = 0;
    const char* end = t->data() + t->size();
    auto res = std::from_chars(t->data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      parse_issue(key, "expected a non-negative integer, got '" + *t + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::vector<double>> reals(const std::string& key) {
    auto t = text(key);
    if (!t) {
      return std::nullopt;
    }
    return split_reals(key, *t);
  }

  // "x1, y1; x2, y2"
  std::optional<std::vector<std::vector<double>>> points(const std::string& key) {
    auto t = text(key);
    if (!t) {
      return std::nullopt;
    }
    std::vector<std::vector<double>> out;
    std::stringstream ss(*t);
    std::string item;
    while (std::getline(ss, item, ';')) {
      if (trim(item).empty()) {
        continue;
      }
      auto v = split_reals(key, item);
      if (!v) {
        return std::nullopt;
      }
      out.push_back(std::move(*v));
    }
    return out;
  }

  void invalid(const std::string& field, const std::string& message) {
    issues_.push_back({ConfigIssue::Kind::validation, line_of(field), field, message});
  }

  void parse_issue(const std::string& field, const std::string& message) {
    issues_.push_back({ConfigIssue::Kind::parse, line_of(field), field, message});
  }

  void report_unknown() {
    for (const auto& [key, v] : values_) {
      if (!used_.count(key)) {
        issues_.push_back({ConfigIssue::Kind::parse, v.second, key, "unknown key"});
      }
    }
  }

  static std::optional<double> parse_real(const std::string& raw) {
    const std::string t = trim(raw);
    if (t == "inf" || t == "+inf" || t == "infinity") {
      return kInf;
    }
    double v = 0.0;
    const char* begin = t.data() + (t.size() > 1 && t[0] == '+' ? 1 : 0);
    const char* end = t.data() + t.size();
    auto res = std::from_chars(begin, end, v);
    if (t.empty() || res.ec != std::errc() || res.ptr != end || std::isnan(v)) {
      return std::nullopt;
    }
    return v;
  }

private:
  std::size_t line_of(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? 0 : it->second.second;
  }

  std::optional<std::vector<double>> split_reals(const std::string& key, const std::string& t) {
    std::vector<double> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto v = parse_real(item);
      if (!v) {
        parse_issue(key, "expected a comma-separated list of numbers, got '" + t + "'");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::map<std::string, std::pair<std::string, std::size_t>> values_;
  std::set<std::string> used_;
  std::vector<ConfigIssue>& issues_;
};

using FlatValues = std::map<std::string, std::pair<std::string, std::size_t>>;

inline FlatValues flatten_text(const std::string& text, std::vector<ConfigIssue>& issues) {
  FlatValues out;
  std::stringstream ss(text);
  std::string raw;
  std::string section;
  std::size_t line = 0;
  while (std::getline(ss, raw, '\n')) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(std::string_view(raw).substr(0, hash));
    if (s.empty()) {
      continue;
    }
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) {
        issues.push_back({ConfigIssue::Kind::parse, line, "", "malformed section header '" + s + "'"});
        continue;
      }
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (section == "general") {
        section.clear();
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      issues.push_back({ConfigIssue::Kind::parse, line, "", "expected key = value, got '" + s + "'"});
      continue;
    }
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) {
      issues.push_back({ConfigIssue::Kind::parse, line, "", "empty key"});
      continue;
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (out.count(full)) {
      issues.push_back({ConfigIssue::Kind::parse, line, full, "key given twice"});
      continue;
    }
    out[full] = {value, line};
  }
  return out;
}

inline void flatten_json(const nlohmann::json& j, const std::string& prefix, FlatValues& out,
                         std::vector<ConfigIssue>& issues) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out, issues);
    }
    return;
  }
  auto scalar = [&](const nlohmann::json& v) -> std::optional<std::string> {
    if (v.is_string()) {
      return v.get<std::string>();
    }
    if (v.is_number_integer() || v.is_number_unsigned()) {
      return v.dump();
    }
    if (v.is_number()) {
      return format_double(v.get<double>());
    }
    return std::nullopt;
  };
  if (j.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i].is_array()) {
        std::string inner;
        for (std::size_t k = 0; k < j[i].size(); ++k) {
          auto v = scalar(j[i][k]);
          inner += (k ? ", " : "") + v.value_or("?");
        }
        s += (i ? "; " : "") + inner;
      } else {
        s += (i ? ", " : "") + scalar(j[i]).value_or("?");
      }
    }
    out[prefix] = {s, 0};
    return;
  }
  if (auto v = scalar(j)) {
    out[prefix] = {*v, 0};
    return;
  }
  issues.push_back({ConfigIssue::Kind::parse, 0, prefix, "unsupported JSON value"});
}

inline std::optional<Window> read_window(FieldReader& r, const std::string& prefix,
                                         std::size_t dim, bool required) {
  auto lower = r.reals(prefix + ".lower");
  auto upper = r.reals(prefix + ".upper");
  if (!lower && !upper) {
    if (required) {
      r.invalid(prefix + ".lower", "missing");
    }
    return std::nullopt;
  }
  if (!lower || !upper) {
    r.invalid(prefix + (lower ? ".upper" : ".lower"), "both bounds are required");
    return std::nullopt;
  }
  if (lower->size() != dim || upper->size() != dim) {
    r.invalid(prefix + ".lower", "bounds must have " + std::to_string(dim) + " coordinates");
    return std::nullopt;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite((*lower)[i]) || !std::isfinite((*upper)[i])) {
      r.invalid(prefix + ".lower", "bounds must be finite");
      return std::nullopt;
    }
    if (!((*lower)[i] < (*upper)[i])) {
      r.invalid(prefix + ".upper", "lower must be strictly below upper in every coordinate");
      return std::nullopt;
    }
  }
  return Window(*lower, *upper);
}

inline PotentialSpec read_potential(FieldReader& r, const std::string& name) {
  PotentialSpec p;
  const std::string prefix = "potential." + name;
  if (auto k = r.text(prefix + ".kind")) {
    p.kind = *k;
  }
  const auto amplitude = r.real(prefix + ".amplitude");
  const auto range = r.real(prefix + ".range");
  const auto exponent = r.real(prefix + ".exponent");
  if (p.kind == "none") {
    return p;
  }
  if (p.kind != "step" && p.kind != "hardcore" && p.kind != "soft-core-power") {
    r.invalid(prefix + ".kind",
              "kind must be none, step, hardcore or soft-core-power, got '" + p.kind + "'");
    p.kind = "none";
    return p;
  }
  if (!range) {
    r.invalid(prefix + ".range", "missing");
  } else if (!(*range > 0.0) || !std::isfinite(*range)) {
    r.invalid(prefix + ".range", "range must be positive and finite");
  } else {
    p.range = *range;
  }
  if (p.kind == "hardcore") {
    p.amplitude = kInf;
    if (amplitude && *amplitude != kInf) {
      r.invalid(prefix + ".amplitude", "hardcore amplitude is inf");
    }
  } else if (!amplitude) {
    r.invalid(prefix + ".amplitude", "missing");
  } else {
    p.amplitude = *amplitude;
    if (p.kind == "soft-core-power" && !std::isfinite(p.amplitude)) {
      r.invalid(prefix + ".amplitude", "soft-core amplitude must be finite");
    }
    if (p.amplitude == -kInf) {
      r.invalid(prefix + ".amplitude", "amplitude -inf is not allowed");
    }
  }
  if (p.kind == "soft-core-power") {
    if (!exponent) {
      r.invalid(prefix + ".exponent", "missing");
    } else if (!(*exponent > 0.0) || !std::isfinite(*exponent)) {
      r.invalid(prefix + ".exponent", "exponent must be positive");
    } else {
      p.exponent = *exponent;
    }
  } else if (exponent && *exponent != 0.0) {
    r.invalid(prefix + ".exponent", "exponent only applies to soft-core-power");
  }
  return p;
}

inline ExperimentConfig build_config(FlatValues values, std::vector<ConfigIssue>& issues) {
  FieldReader r(std::move(values), issues);
  ExperimentConfig c;
  if (auto d = r.integer("dimension")) {
    if (*d == 0 || *d > 16) {
      r.invalid("dimension", "dimension must be between 1 and 16");
    } else {
      c.dimension = *d;
    }
  } else if (!r.has("dimension")) {
    r.invalid("dimension", "missing");
  }
  if (auto w = read_window(r, "window", c.dimension, true)) {
    c.window = *w;
  } else {
    c.window = Window::unit(c.dimension);
  }
  if (auto z = r.real("intensity.z")) {
    if (!(*z > 0.0) || !std::isfinite(*z)) {
      r.invalid("intensity.z", "z must be positive and finite");
    } else {
      c.z = *z;
    }
  } else if (!r.has("intensity.z")) {
    r.invalid("intensity.z", "missing");
  }
  if (auto d = r.text("intensity.density")) {
    if (*d != "constant" && *d != "linear-x1") {
      r.invalid("intensity.density", "density must be constant or linear-x1");
    } else {
      c.density = *d;
    }
  }
  if (auto g = r.integer("intensity.grid")) {
    if (*g == 0) {
      r.invalid("intensity.grid", "grid must be positive");
    } else {
      c.density_grid = *g;
    }
  }
  c.cross = read_potential(r, "cross");
  c.self_plus = read_potential(r, "self_plus");
  c.self_minus = read_potential(r, "self_minus");
  if (auto s = r.integer("seed")) {
    c.seed = *s;
  } else if (!r.has("seed")) {
    r.invalid("seed", "missing");
  }

  for (Species s : {Species::plus, Species::minus}) {
    const std::string key = std::string("boundary.") + to_string(s);
    if (auto pts = r.points(key)) {
      std::vector<Point> ps;
      bool ok = true;
      for (auto& p : *pts) {
        if (p.size() != c.dimension) {
          r.invalid(key, "boundary point has the wrong dimension");
          ok = false;
          break;
        }
        ps.emplace_back(std::move(p));
        if (c.window.contains(ps.back())) {
          r.invalid(key, "boundary point " + ps.back().str() + " lies inside the window");
          ok = false;
          break;
        }
      }
      if (ok) {
        try {
          c.boundary.of(s) = Configuration(std::move(ps));
        } catch (const DuplicatePoint& e) {
          r.invalid(key, e.what());
        }
      }
    }
  }
  if (!check_disjoint(c.boundary)) {
    r.invalid("boundary.minus", "boundary point shared by both species");
  }

  if (auto v = r.integer("sampler.steps")) {
    c.sampler.steps = *v;
  }
  if (auto v = r.integer("sampler.burnin")) {
    c.sampler.burnin = *v;
  }
  if (auto v = r.integer("sampler.thin")) {
    c.sampler.thin = *v;
  }
  if (auto v = r.integer("sampler.chains")) {
    c.sampler.chains = *v;
  }
  if (c.sampler.thin == 0) {
    r.invalid("sampler.thin", "thin must be at least 1");
  }
  if (c.sampler.chains == 0) {
    r.invalid("sampler.chains", "chains must be at least 1");
  }

  if (auto v = r.integer("oracle.nmax")) {
    if (*v > 12) {
      r.invalid("oracle.nmax", "nmax above 12 is not supported");
    } else {
      c.oracle.n_max = static_cast<int>(*v);
    }
  }
  if (auto v = r.integer("oracle.mc_per_term")) {
    if (*v == 0) {
      r.invalid("oracle.mc_per_term", "need at least one point per term");
    } else {
      c.oracle.mc_per_term = *v;
    }
  }
  if (auto v = r.integer("oracle.samples")) {
    c.oracle.samples = *v;
  }

  if (auto v = r.text("verify.h")) {
    const auto& ids = test_function_ids();
    if (std::find(ids.begin(), ids.end(), *v) == ids.end()) {
      r.invalid("verify.h", "unknown test function '" + *v + "'");
    } else {
      c.verify.h = *v;
    }
  }
  if (auto v = r.integer("verify.sigma_points")) {
    if (*v == 0) {
      r.invalid("verify.sigma_points", "need at least one sigma point");
    } else {
      c.verify.sigma_points = *v;
    }
  }
  if (auto v = r.integer("verify.ruelle_draws")) {
    if (*v == 0) {
      r.invalid("verify.ruelle_draws", "need at least one draw");
    } else {
      c.verify.ruelle_draws = *v;
    }
  }
  if (auto v = r.integer("verify.identity_instances")) {
    c.verify.identity_instances = *v;
  }
  if (auto v = r.real("verify.radius")) {
    if (!(*v > 0.0) || !std::isfinite(*v)) {
      r.invalid("verify.radius", "radius must be positive");
    } else {
      c.verify.radius = *v;
    }
  }
  if (auto v = r.real("verify.slope")) {
    if (!std::isfinite(*v)) {
      r.invalid("verify.slope", "slope must be finite");
    } else {
      c.verify.slope = *v;
    }
  }
  auto sub = [&](const std::string& prefix, std::optional<Window>& slot) {
    if (auto w = read_window(r, prefix, c.dimension, false)) {
      if (!c.window.contains(*w)) {
        r.invalid(prefix + ".lower", "subwindow must lie inside the window");
      } else {
        slot = *w;
      }
    }
  };
  sub("verify.subwindow", c.verify.subwindow);
  sub("verify.ruelle_plus", c.verify.ruelle_plus);
  sub("verify.ruelle_minus", c.verify.ruelle_minus);

  r.report_unknown();
  return c;
}

} // namespace detail

// Parses text or JSON (input starting with '{'). Throws ConfigError listing every
// problem found. Defaults, including the derived burn-in, are filled in.
inline ExperimentConfig parse_config(const std::string& text) {
  std::vector<ConfigIssue> issues;
  detail::FlatValues values;
  const std::string head = detail::trim(text);
  if (!head.empty() && head.front() == '{') {
    try {
      detail::flatten_json(nlohmann::json::parse(text), "", values, issues);
    } catch (const nlohmann::json::exception& e) {
      issues.push_back({ConfigIssue::Kind::parse, 0, "", e.what()});
    }
  } else {
    values = detail::flatten_text(text, issues);
  }
  ExperimentConfig c = detail::build_config(std::move(values), issues);
  if (issues.empty()) {
    try {
      ChainSpec spec = c.chain_spec();
      c.sampler.burnin = spec.burnin;
      if (!(c.sampler.steps > spec.burnin)) {
        issues.push_back({ConfigIssue::Kind::validation, 0, "sampler.steps",
                          "steps must exceed burnin (" + std::to_string(spec.burnin) + ")"});
      }
      if (!hardcore_feasible(spec.model, c.boundary)) {
        issues.push_back({ConfigIssue::Kind::validation, 0, "boundary.plus",
                          "boundary violates a hard-core constraint"});
      }
    } catch (const Error& e) {
      issues.push_back({ConfigIssue::Kind::validation, 0, "", e.what()});
    }
  }
  if (!issues.empty()) {
    throw ConfigError(std::move(issues));
  }
  return c;
}

// Canonical text form with every setting explicit.
inline std::string echo_config(const ExperimentConfig& c) {
  using detail::format_double;
  using detail::format_list;
  std::ostringstream o;
  o << "dimension = " << c.dimension << "\n";
  o << "seed = " << c.seed << "\n";
  o << "\n[window]\n";
  o << "lower = " << format_list(c.window.lower()) << "\n";
  o << "upper = " << format_list(c.window.upper()) << "\n";
  o << "\n[intensity]\n";
  o << "z = " << format_double(c.z) << "\n";
  o << "density = " << c.density << "\n";
  o << "grid = " << c.density_grid << "\n";
  auto pot = [&](const char* name, const PotentialSpec& p) {
    o << "\n[potential." << name << "]\n";
    o << "kind = " << p.kind << "\n";
    if (p.kind != "none") {
      o << "amplitude = " << format_double(p.amplitude) << "\n";
      o << "range = " << format_double(p.range) << "\n";
      if (p.kind == "soft-core-power") {
        o << "exponent = " << format_double(p.exponent) << "\n";
      }
    }
  };
  pot("cross", c.cross);
  pot("self_plus", c.self_plus);
  pot("self_minus", c.self_minus);
  if (!c.boundary.plus.empty() || !c.boundary.minus.empty()) {
    o << "\n[boundary]\n";
    if (!c.boundary.plus.empty()) {
      o << "plus = " << detail::format_points(c.boundary.plus) << "\n";
    }
    if (!c.boundary.minus.empty()) {
      o << "minus = " << detail::format_points(c.boundary.minus) << "\n";
    }
  }
  o << "\n[sampler]\n";
  o << "steps = " << c.sampler.steps << "\n";
  if (c.sampler.burnin) {
    o << "burnin = " << *c.sampler.burnin << "\n";
  }
  o << "thin = " << c.sampler.thin << "\n";
  o << "chains = " << c.sampler.chains << "\n";
  o << "\n[oracle]\n";
  o << "nmax = " << c.oracle.n_max << "\n";
  o << "mc_per_term = " << c.oracle.mc_per_term << "\n";
  o << "samples = " << c.oracle.samples << "\n";
  o << "\n[verify]\n";
  o << "h = " << c.verify.h << "\n";
  o << "sigma_points = " << c.verify.sigma_points << "\n";
  o << "ruelle_draws = " << c.verify.ruelle_draws << "\n";
  o << "identity_instances = " << c.verify.identity_instances << "\n";
  o << "radius = " << format_double(c.verify.radius) << "\n";
  o << "slope = " << format_double(c.verify.slope) << "\n";
  auto win = [&](const char* name, const std::optional<Window>& w) {
    if (w) {
      o << name << ".lower = " << format_list(w->lower()) << "\n";
      o << name << ".upper = " << format_list(w->upper()) << "\n";
    }
  };
  win("subwindow", c.verify.subwindow);
  win("ruelle_plus", c.verify.ruelle_plus);
  win("ruelle_minus", c.verify.ruelle_minus);
  return o.str();
}

} // namespace bigibbs
