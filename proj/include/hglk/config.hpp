#pragma once
// Run configuration: a flat sectioned text format with # comments, aggregated
// validation, and a canonical serialization for the manifest hash. The output
// directory is deliberately excluded from the canonical form so the same
// experiment hashes identically wherever its files land.

#include <cstdint>
#include <string>
#include <vector>

#include "hglk/families.hpp"
#include "hglk/io.hpp"

namespace hglk {

struct RunConfig {
  // grid
  int n = 64;
  double length = 8.0;
  // coeff
  CoeffSpec coeff{CoeffKind::constant, 1.0, 0.0, 1, 16, 1};
  // potential, split into the weak-Lorentz part and the bounded part
  PotSpec pot_singular{PotKind::zero, 0.0, 100.0, 3.0, 32, 1};
  PotSpec pot_bounded{PotKind::zero, 0.0, 100.0, 3.0, 24, 1};
  double lorentz_q = 3.0;
  double theta = 0.5;
  // frac
  double s = 1.0;
  int quad_nodes = 400;
  // sim
  double p = 2.0;
  double dt = 1e-3;
  double t_max = 1.0;
  double blowup_threshold = 1e8;
  double weight_a = 0.7;
  double amplitude = 1.0;
  int cadence = 1;
  std::uint64_t sim_seed = 1;
  // output
  std::string out_dir = "out";
  bool format_csv = true;
  bool format_json = true;
};

struct ConfigResult {
  RunConfig config;
  std::vector<std::string> errors;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_double_value(const std::string& text, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

inline bool parse_int_value(const std::string& text, long long& out) {
  try {
    std::size_t used = 0;
    out = std::stoll(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace detail

// Assigns one dotted key. Returns false (and appends a message) on unknown
// keys or unconvertible values; never half-applies.
inline bool set_config_key(RunConfig& cfg, const std::string& key, const std::string& value,
                           std::vector<std::string>& errors) {
  auto fail = [&](const std::string& msg) {
    errors.push_back(key + ": " + msg);
    return false;
  };
  auto as_double = [&](double& slot) {
    double v = 0.0;
    if (!detail::parse_double_value(value, v)) return fail("number expected, got '" + value + "'");
    slot = v;
    return true;
  };
  auto as_int = [&](int& slot) {
    long long v = 0;
    if (!detail::parse_int_value(value, v)) return fail("integer expected, got '" + value + "'");
    slot = static_cast<int>(v);
    return true;
  };
  auto as_seed = [&](std::uint64_t& slot) {
    long long v = 0;
    if (!detail::parse_int_value(value, v) || v < 0)
      return fail("nonnegative integer expected, got '" + value + "'");
    slot = static_cast<std::uint64_t>(v);
    return true;
  };

  if (key == "grid.n") return as_int(cfg.n);
  if (key == "grid.length") return as_double(cfg.length);

  if (key == "coeff.family") {
    if (value == "constant") cfg.coeff.kind = CoeffKind::constant;
    else if (value == "sinusoidal") cfg.coeff.kind = CoeffKind::sinusoidal;
    else if (value == "random_lipschitz") cfg.coeff.kind = CoeffKind::random_lipschitz;
    else return fail("unknown family '" + value + "'");
    return true;
  }
  if (key == "coeff.base") return as_double(cfg.coeff.base);
  if (key == "coeff.amplitude") return as_double(cfg.coeff.amplitude);
  if (key == "coeff.waves") return as_int(cfg.coeff.waves);
  if (key == "coeff.knots") return as_int(cfg.coeff.knots);
  if (key == "coeff.seed") return as_seed(cfg.coeff.seed);

  if (key == "potential.singular") {
    if (value == "zero") cfg.pot_singular.kind = PotKind::zero;
    else if (value == "inverse_power") cfg.pot_singular.kind = PotKind::inverse_power;
    else return fail("unknown family '" + value + "'");
    return true;
  }
  if (key == "potential.bounded") {
    if (value == "zero") cfg.pot_bounded.kind = PotKind::zero;
    else if (value == "seeded_noise") cfg.pot_bounded.kind = PotKind::seeded_noise;
    else return fail("unknown family '" + value + "'");
    return true;
  }
  if (key == "potential.vmax") {
    if (!as_double(cfg.pot_singular.vmax)) return false;
    cfg.pot_bounded.vmax = cfg.pot_singular.vmax;
    return true;
  }
  if (key == "potential.depth") return as_double(cfg.pot_bounded.depth);
  if (key == "potential.knots") return as_int(cfg.pot_bounded.knots);
  if (key == "potential.q") {
    if (!as_double(cfg.lorentz_q)) return false;
    cfg.pot_singular.q = cfg.lorentz_q;
    cfg.pot_bounded.q = cfg.lorentz_q;
    return true;
  }
  if (key == "potential.theta") return as_double(cfg.theta);
  if (key == "potential.seed") {
    if (!as_seed(cfg.pot_bounded.seed)) return false;
    cfg.pot_singular.seed = cfg.pot_bounded.seed;
    return true;
  }

  if (key == "frac.s") return as_double(cfg.s);
  if (key == "frac.quad_nodes") return as_int(cfg.quad_nodes);

  if (key == "sim.p") return as_double(cfg.p);
  if (key == "sim.dt") return as_double(cfg.dt);
  if (key == "sim.t_max") return as_double(cfg.t_max);
  if (key == "sim.blowup_threshold") return as_double(cfg.blowup_threshold);
  if (key == "sim.weight_a") return as_double(cfg.weight_a);
  if (key == "sim.amplitude") return as_double(cfg.amplitude);
  if (key == "sim.cadence") return as_int(cfg.cadence);
  if (key == "sim.seed") return as_seed(cfg.sim_seed);

  if (key == "output.dir") {
    cfg.out_dir = value;
    return true;
  }
  if (key == "output.formats") {
    bool csv = false, json = false;
    std::size_t start = 0;
    while (start <= value.size()) {
      const std::size_t comma = value.find(',', start);
      const std::string tok =
          detail::trim(value.substr(start, comma == std::string::npos ? comma : comma - start));
      if (tok == "csv") csv = true;
      else if (tok == "json") json = true;
      else if (!tok.empty()) return fail("unknown format '" + tok + "'");
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    cfg.format_csv = csv;
    cfg.format_json = json;
    return true;
  }

  return fail("unknown key");
}

inline ConfigResult parse_config(const std::string& text) {
  ConfigResult res;
  static const std::vector<std::string> known_sections{"grid",     "coeff",  "potential",
                                                       "frac",     "sim",    "output"};
  std::string section;
  bool section_known = true;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        res.errors.push_back("line " + std::to_string(line_no) + ": unterminated section header");
        continue;
      }
      section = detail::trim(line.substr(1, line.size() - 2));
      section_known = false;
      for (const std::string& s : known_sections)
        if (s == section) section_known = true;
      if (!section_known)
        res.errors.push_back("line " + std::to_string(line_no) + ": unknown section '" + section +
                             "'");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      res.errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    if (!section_known) continue;  // already reported at the header
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty()) {
      res.errors.push_back("line " + std::to_string(line_no) + ": key outside any section");
      continue;
    }
    set_config_key(res.config, section + "." + key, value, res.errors);
  }
  return res;
}

// Range checks for every numeric field, aggregated so one run reports all
// problems at once.
inline std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  require(cfg.n >= 2 && (cfg.n & (cfg.n - 1)) == 0, "grid.n: power of two >= 2 required");
  require(cfg.length > 0.0, "grid.length: positive value required");
  require(cfg.coeff.base > 0.0, "coeff.base: positive value required");
  require(cfg.coeff.amplitude >= 0.0, "coeff.amplitude: nonnegative value required");
  require(cfg.coeff.waves >= 1, "coeff.waves: positive integer required");
  require(cfg.coeff.knots >= 2, "coeff.knots: at least 2 knots required");
  require(cfg.pot_singular.vmax > 0.0, "potential.vmax: positive value required");
  require(cfg.pot_bounded.depth >= 0.0, "potential.depth: nonnegative value required");
  require(cfg.pot_bounded.knots >= 2, "potential.knots: at least 2 knots required");
  require(cfg.lorentz_q > 2.0, "potential.q: q > 2 required");
  require(cfg.theta > 0.0 && cfg.theta < 1.0, "potential.theta: value in (0, 1) required");
  require(cfg.s > 0.0 && cfg.s < 2.0, "frac.s: value in (0, 2) required");
  require(cfg.quad_nodes >= 16 && cfg.quad_nodes % 4 == 0,
          "frac.quad_nodes: at least 16 nodes, multiple of 4, required");
  require(cfg.p > 1.0, "sim.p: p > 1 required");
  require(cfg.dt > 0.0, "sim.dt: positive value required");
  require(cfg.t_max > 0.0, "sim.t_max: positive value required");
  require(cfg.blowup_threshold > 0.0, "sim.blowup_threshold: positive value required");
  require(cfg.weight_a > 0.5 && cfg.weight_a < 1.0, "sim.weight_a: value in (1/2, 1) required");
  require(cfg.amplitude >= 0.0, "sim.amplitude: nonnegative value required");
  require(cfg.cadence >= 1, "sim.cadence: positive integer required");
  require(cfg.format_csv || cfg.format_json,
          "output.formats: at least one of csv, json required");
  return errors;
}

inline const char* coeff_family_name(CoeffKind k) {
  switch (k) {
    case CoeffKind::constant: return "constant";
    case CoeffKind::sinusoidal: return "sinusoidal";
    default: return "random_lipschitz";
  }
}

inline const char* pot_family_name(PotKind k) {
  switch (k) {
    case PotKind::zero: return "zero";
    case PotKind::inverse_power: return "inverse_power";
    default: return "seeded_noise";
  }
}

// Fixed-order serialization of the experiment parameters; feeds the manifest
// config hash. output.dir is excluded on purpose.
inline std::string config_canonical_string(const RunConfig& cfg) {
  std::string out;
  auto kv = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("grid.n", std::to_string(cfg.n));
  kv("grid.length", format_double(cfg.length));
  kv("coeff.family", coeff_family_name(cfg.coeff.kind));
  kv("coeff.base", format_double(cfg.coeff.base));
  kv("coeff.amplitude", format_double(cfg.coeff.amplitude));
  kv("coeff.waves", std::to_string(cfg.coeff.waves));
  kv("coeff.knots", std::to_string(cfg.coeff.knots));
  kv("coeff.seed", std::to_string(cfg.coeff.seed));
  kv("potential.singular", pot_family_name(cfg.pot_singular.kind));
  kv("potential.bounded", pot_family_name(cfg.pot_bounded.kind));
  kv("potential.vmax", format_double(cfg.pot_singular.vmax));
  kv("potential.depth", format_double(cfg.pot_bounded.depth));
  kv("potential.knots", std::to_string(cfg.pot_bounded.knots));
  kv("potential.q", format_double(cfg.lorentz_q));
  kv("potential.theta", format_double(cfg.theta));
  kv("potential.seed", std::to_string(cfg.pot_bounded.seed));
  kv("frac.s", format_double(cfg.s));
  kv("frac.quad_nodes", std::to_string(cfg.quad_nodes));
  kv("sim.p", format_double(cfg.p));
  kv("sim.dt", format_double(cfg.dt));
  kv("sim.t_max", format_double(cfg.t_max));
  kv("sim.blowup_threshold", format_double(cfg.blowup_threshold));
  kv("sim.weight_a", format_double(cfg.weight_a));
  kv("sim.amplitude", format_double(cfg.amplitude));
  kv("sim.cadence", std::to_string(cfg.cadence));
  kv("sim.seed", std::to_string(cfg.sim_seed));
  std::string formats;
  if (cfg.format_csv) formats = "csv";
  if (cfg.format_json) formats += formats.empty() ? "json" : ",json";
  kv("output.formats", formats);
  return out;
}

}  // namespace hglk
