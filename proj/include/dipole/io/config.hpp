#pragma once

// Run configuration: flat `key = value` files with `#` comments, overridden
// key by key from the command line.

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "dipole/eigensolver.hpp"
#include "dipole/errors.hpp"
#include "dipole/model.hpp"

namespace dipole::io {

enum class Format { csv, tsv };

struct RunConfig {
  SystemParams params;
  int n_max = 5;
  std::optional<EnergyWindow> window;  // default_window() when absent
  double rmax_mult = 25.0;
  int steps = 40000;
  double x0_threshold = default_x0_threshold;
  std::string out;                     // empty: stdout
  Format format = Format::csv;
  std::optional<double> r_wall;        // frozen-coefficient wall; absent: r0
  int points = 200;                    // rows for potential/field, profile decimation
  double r_end_mult = 10.0;            // potential/field sampled on [r0, r_end_mult * r0]
  int level = 1;                       // wavefunction: shooting level (1 = ground)
  std::optional<double> energy;        // wavefunction: shoot at this energy instead
  int cutoff_kmax = 20;                // cutoff-scan: r_wall = r0 2^-k, k = 0..kmax

  SolverOptions solver() const {
    SolverOptions o;
    o.rmax_mult = rmax_mult;
    o.steps = steps;
    return o;
  }
};

/// Flag overrides keyed like the file (`window_lo`, not `--window-lo`).
using Overrides = std::map<std::string, std::string>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "m",           "alpha",    "rho0",   "r0",     "ell",        "nmax",  "window_lo",
      "window_hi",   "rmax_mult", "steps", "x0_threshold", "out",  "format", "r_wall",
      "points",      "r_end_mult", "level", "energy", "cutoff_kmax"};
  return keys;
}

inline double to_real(const std::string& key, const std::string& v) {
  double out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw config_error("config: " + key + " = '" + v + "' is not a finite real number");
  return out;
}

inline int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw config_error("config: " + key + " = '" + v + "' is not an integer");
  return out;
}

} // namespace detail

/// Parses the file contents into key/value pairs; errors carry the line number.
inline std::map<std::string, std::string> parse_key_values(std::string_view contents) {
  std::map<std::string, std::string> kv;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    const auto nl = contents.find('\n', pos);
    std::string_view line = contents.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? contents.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& why) {
      std::ostringstream os;
      os << "config line " << lineno << ": " << why << ": '" << line << "'";
      throw config_error(os.str());
    };
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) fail("missing key");
    if (value.empty()) fail("missing value");
    if (!detail::known_keys().count(key)) fail("unknown key '" + key + "'");
    if (kv.count(key)) fail("duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

/// File values first, then flag overrides. m, alpha, rho0, r0 and ell are required.
inline RunConfig parse_config(std::string_view contents, const Overrides& flags = {}) {
  auto kv = parse_key_values(contents);
  for (const auto& [k, v] : flags) {
    if (!detail::known_keys().count(k)) throw config_error("config: unknown option '" + k + "'");
    kv[k] = v;
  }
  for (const char* req : {"m", "alpha", "rho0", "r0", "ell"})
    if (!kv.count(req)) throw config_error(std::string("config: missing required key '") + req + "'");

  RunConfig c;
  auto real = [&](const char* k) { return detail::to_real(k, kv.at(k)); };
  auto integer = [&](const char* k) { return detail::to_int(k, kv.at(k)); };
  c.params.m = real("m");
  c.params.alpha = real("alpha");
  c.params.rho0 = real("rho0");
  c.params.r0 = real("r0");
  c.params.ell = integer("ell");
  if (kv.count("nmax")) c.n_max = integer("nmax");
  if (kv.count("window_lo") != kv.count("window_hi"))
    throw config_error("config: window_lo and window_hi must be given together");
  if (kv.count("window_lo")) c.window = EnergyWindow{real("window_lo"), real("window_hi")};
  if (kv.count("rmax_mult")) c.rmax_mult = real("rmax_mult");
  if (kv.count("steps")) c.steps = integer("steps");
  if (kv.count("x0_threshold")) c.x0_threshold = real("x0_threshold");
  if (kv.count("out")) c.out = kv.at("out");
  if (kv.count("format")) {
    const auto& f = kv.at("format");
    if (f == "csv") {
      c.format = Format::csv;
    } else if (f == "tsv") {
      c.format = Format::tsv;
    } else {
      throw config_error("config: format must be csv or tsv (got '" + f + "')");
    }
  }
  if (kv.count("r_wall")) c.r_wall = real("r_wall");
  if (kv.count("points")) c.points = integer("points");
  if (kv.count("r_end_mult")) c.r_end_mult = real("r_end_mult");
  if (kv.count("level")) c.level = integer("level");
  if (kv.count("energy")) c.energy = real("energy");
  if (kv.count("cutoff_kmax")) c.cutoff_kmax = integer("cutoff_kmax");

  try {
    c.params.validate();
  } catch (const argument_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  auto bad = [](const std::string& why) { throw config_error("config: " + why); };
  if (c.n_max < 1) bad("nmax must be >= 1");
  if (c.steps < 1000) bad("steps must be >= 1000");
  if (!(c.rmax_mult > 0)) bad("rmax_mult must be > 0");
  if (!(c.x0_threshold > 0)) bad("x0_threshold must be > 0");
  if (c.window && !(c.window->lo < c.window->hi)) bad("window_lo must be < window_hi");
  if (c.r_wall && !(*c.r_wall > 0)) bad("r_wall must be > 0");
  if (c.points < 2) bad("points must be >= 2");
  if (!(c.r_end_mult > 1)) bad("r_end_mult must be > 1");
  if (c.level < 1) bad("level must be >= 1");
  if (c.cutoff_kmax < 0) bad("cutoff_kmax must be >= 0");
  return c;
}

} // namespace dipole::io
