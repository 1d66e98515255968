// Command-line driver: parses the sectioned config, dispatches one
// subcommand, and emits CSV/JSON artifacts plus a hashed manifest under the
// output directory. Exit codes: 0 success, 2 config error, 3 numerical
// failure, 4 property-suite failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hglk/besov.hpp"
#include "hglk/commutator.hpp"
#include "hglk/config.hpp"
#include "hglk/evolve.hpp"
#include "hglk/io.hpp"
#include "hglk/rng.hpp"
#include "hglk/suite.hpp"

using nlohmann::ordered_json;
using namespace hglk;

namespace {

struct ConfigError {
  std::vector<std::string> messages;
};

void print_error(const std::string& kind, const std::vector<std::string>& messages) {
  ordered_json err;
  err["error"]["kind"] = kind;
  err["error"]["messages"] = messages;
  std::cout << err.dump(2) << "\n";
}

RunConfig load_config(const std::string& config_path, const std::vector<std::string>& sets,
                      const std::string& out_override) {
  RunConfig cfg;
  std::vector<std::string> errors;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError{{"cannot read config file '" + config_path + "'"}};
    std::ostringstream ss;
    ss << in.rdbuf();
    ConfigResult parsed = parse_config(ss.str());
    cfg = parsed.config;
    errors = parsed.errors;
  }
  for (const std::string& kv : sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      errors.push_back("--set expects key=value, got '" + kv + "'");
      continue;
    }
    set_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1), errors);
  }
  for (const std::string& msg : validate_config(cfg)) errors.push_back(msg);
  if (!errors.empty()) throw ConfigError{errors};
  if (!out_override.empty()) cfg.out_dir = out_override;
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  return fnv1a64_hex(config_canonical_string(cfg));
}

HalfOrderSetup build_setup(const RunConfig& cfg, const Grid& g) {
  return make_half_order(g, cfg.coeff, cfg.pot_singular, cfg.pot_bounded, cfg.lorentz_q,
                         cfg.theta);
}

CVec gaussian_data(const Grid& g, double amplitude) {
  return csample(g,
                 [amplitude](double x) { return cplx(amplitude * std::exp(-0.5 * x * x), 0.0); });
}

// Largest measured ratio of the multiplier commutator bound on this operator:
// the weight itself plus a seeded band-limited family.
double measure_c_emp(const HalfOrderSetup& setup, const RVec& w, std::uint64_t seed) {
  double c_emp = besov_commutator_report(setup, w).ratio;
  Rng rng(seed);
  for (int trial = 0; trial < 12; ++trial) {
    CommutatorReport rep =
        besov_commutator_report(setup, random_band_limited_real(setup.grid, 16, rng));
    if (!rep.flagged && std::isfinite(rep.ratio)) c_emp = std::max(c_emp, rep.ratio);
  }
  return c_emp;
}

ordered_json json_or_null(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

void run_spectrum(const RunConfig& cfg) {
  Grid g = Grid::make(cfg.n, cfg.length);
  HalfOrderSetup setup = build_setup(cfg, g);
  Emitter out(cfg.out_dir);

  if (cfg.format_csv) {
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < g.n; ++k)
      rows.push_back({static_cast<double>(k), setup.sd.lambda[k]});
    out.add("spectrum.csv", csv_string({"k", "lambda"}, rows));
  }
  if (cfg.format_json) {
    const double lam_max_abs =
        std::max(std::fabs(setup.sd.lambda.back()), std::fabs(setup.sd.lambda.front()));
    ordered_json rep;
    rep["grid"] = {{"n", g.n}, {"length", g.length}, {"h", g.h()}};
    rep["ellipticity"] = {{"c1", setup.op.coeff.c1},
                          {"c2", setup.op.coeff.c2},
                          {"lipschitz", setup.op.coeff.lip}};
    rep["potential"] = {{"lorentz_norm", setup.op.pot.lorentz_norm},
                        {"bounded_norm", setup.op.pot.bounded_norm},
                        {"q", setup.op.pot.q},
                        {"theta", setup.op.pot.theta}};
    rep["spectrum"] = {{"lambda_min", setup.sd.lambda.front()},
                       {"lambda_max", setup.sd.lambda.back()}};
    rep["nonnegative_form"] = setup.sd.lambda.front() >= -1e-10 * std::max(lam_max_abs, 1e-300);
    out.add("assumptions.json", json_string(rep));
  }
  out.write_all(config_hash(cfg), cfg.sim_seed);
}

void run_fracpow(const RunConfig& cfg) {
  Grid g = Grid::make(cfg.n, cfg.length);
  HalfOrderSetup setup = build_setup(cfg, g);
  Mat d_spec = frac_power_spectral(setup.sd, cfg.s);
  const double scale = frobenius(d_spec);

  const double lam_min = lambda_min_positive(setup.sd.lambda);
  const double lam_max = setup.sd.lambda.back();
  BalakrishnanResult lo = frac_power_balakrishnan(
      setup.op, cfg.s, balakrishnan_rule(lam_min, lam_max, cfg.s, cfg.quad_nodes));
  BalakrishnanResult hi = frac_power_balakrishnan(
      setup.op, cfg.s, balakrishnan_rule(lam_min, lam_max, cfg.s, 2 * cfg.quad_nodes));
  const double gap = frobenius(sub(lo.matrix, d_spec)) / scale;
  const double gap2 = frobenius(sub(hi.matrix, d_spec)) / scale;

  Emitter out(cfg.out_dir);
  if (cfg.format_json) {
    ordered_json rep;
    rep["s"] = cfg.s;
    rep["quad_nodes"] = cfg.quad_nodes;
    rep["rel_gap"] = gap;
    rep["rel_gap_doubled"] = gap2;
    rep["reduction_factor"] = gap2 > 0.0 ? gap / gap2 : std::numeric_limits<double>::infinity();
    rep["range_warning"] = lo.range_warning;
    if (cfg.s == 1.0) {
      rep["sqrt_residual"] =
          frobenius(sub(mat_mul(d_spec, d_spec), setup.op.matrix)) / frobenius(setup.op.matrix);
    } else {
      rep["sqrt_residual"] = nullptr;
    }
    out.add("fracpow.json", json_string(rep));
  }
  out.write_all(config_hash(cfg), cfg.sim_seed);
}

void run_besov(const RunConfig& cfg) {
  Grid g = Grid::make(cfg.n, cfg.length);
  const RVec w = bracket_weight(g, cfg.weight_a);
  DyadicBank bank = make_bank(g);

  auto rows = weight_scan({cfg.weight_a, 1.0}, {64.0, 128.0, 256.0, 512.0});
  CVec probe = gaussian_data(g, 1.0);

  Emitter out(cfg.out_dir);
  if (cfg.format_csv) out.add("weight_scan.csv", weight_scan_csv(rows));
  if (cfg.format_json) {
    ordered_json rep;
    rep["weight"] = {{"a", cfg.weight_a},
                     {"windowed_b1", windowed_besov_b1(g, w)},
                     {"full_b1", besov_norm(bank, to_complex(w), 1.0,
                                            std::numeric_limits<double>::infinity(), 1.0, true)
                                     .value}};
    rep["probe"] = {{"gaussian_b1_inf_1",
                     besov_norm(bank, probe, 1.0, std::numeric_limits<double>::infinity(), 1.0,
                                true)
                         .value}};
    const RVec t_grid = log_spaced(2.0 * g.h(), g.length / 4.0, 33);
    rep["second_difference"] = {{"weight_norm", second_difference_norm(g, w, t_grid)}};
    rep["scan"] = ordered_json::array();
    for (const auto& row : rows) {
      rep["scan"].push_back({{"a", row.a},
                             {"length", row.length},
                             {"j_min", row.j_min},
                             {"j_max", row.j_max},
                             {"besov_windowed", row.besov_windowed},
                             {"besov_full", row.besov_full},
                             {"tail_ratio", row.tail_ratio},
                             {"verdict", row.verdict}});
    }
    out.add("besov.json", json_string(rep));
  }
  out.write_all(config_hash(cfg), cfg.sim_seed);
}

void run_commutator(const RunConfig& cfg) {
  Grid g = Grid::make(cfg.n, cfg.length);
  HalfOrderSetup setup = build_setup(cfg, g);
  ordered_json estimates = ordered_json::array();

  {
    Rng rng(cfg.sim_seed);
    double max_ratio = 0.0;
    CommutatorReport best;
    const RVec w = bracket_weight(g, cfg.weight_a);
    best = besov_commutator_report(setup, w);
    max_ratio = best.flagged ? 0.0 : best.ratio;
    for (int trial = 0; trial < 12; ++trial) {
      CommutatorReport rep =
          besov_commutator_report(setup, random_band_limited_real(g, 16, rng));
      if (!rep.flagged && rep.ratio > max_ratio) {
        max_ratio = rep.ratio;
        best = rep;
      }
    }
    estimates.push_back({{"estimate_id", "besov_commutator"},
                         {"grid_n", g.n},
                         {"trials", 13},
                         {"max_ratio", max_ratio},
                         {"op_norm", best.op_norm},
                         {"bound_parts",
                          {{"besov_term", best.bound_parts.besov_term},
                           {"potential_term", best.bound_parts.potential_term}}},
                         {"seed", cfg.sim_seed}});
  }
  {
    RVec sine = sample(g, [&](double x) { return std::sin(2.0 * pi * x / g.length); });
    CommutatorReport rep = lipschitz_commutator_report(g, sine);
    estimates.push_back({{"estimate_id", "lipschitz_commutator"},
                         {"grid_n", g.n},
                         {"ratio", rep.ratio},
                         {"op_norm", rep.op_norm},
                         {"lipschitz", rep.bound_parts.lipschitz}});
  }
  {
    Rng rng(cfg.sim_seed + 1);
    const double s_half = std::min(0.9, std::max(0.1, 0.5 * cfg.s));
    double max_ratio = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
      CVec f = random_band_limited_complex(g, 12, rng);
      CVec h = random_band_limited_complex(g, 12, rng);
      LeibnizReport rep = fractional_leibniz_report(g, f, h, s_half);
      max_ratio = std::max(max_ratio, rep.residual_ratio);
    }
    estimates.push_back({{"estimate_id", "fractional_leibniz"},
                         {"grid_n", g.n},
                         {"s", s_half},
                         {"trials", 12},
                         {"max_residual_ratio", max_ratio},
                         {"seed", cfg.sim_seed + 1}});
  }
  {
    Rng rng(cfg.sim_seed + 2);
    const double inf = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
      CVec f = random_band_limited_complex(g, 12, rng);
      CVec h = random_band_limited_complex(g, 12, rng);
      KatoPonceReport rep = kato_ponce_report(g, f, h, cfg.s, 2.0, 4.0, 4.0, 4.0, 4.0);
      (void)inf;
      max_ratio = std::max(max_ratio, rep.ratio);
    }
    estimates.push_back({{"estimate_id", "kato_ponce"},
                         {"grid_n", g.n},
                         {"s", cfg.s},
                         {"trials", 12},
                         {"max_ratio", max_ratio},
                         {"seed", cfg.sim_seed + 2}});
  }
  {
    const int j = 3;
    const double freq = std::pow(2.0, j) * 2.0 * pi / g.length *
                        std::max(1.0, std::floor(g.length / (2.0 * pi)));
    RVec f = sample(g, [freq](double x) { return std::cos(freq * x); });
    DyadicCommutatorReport rep = dyadic_commutator_report(setup, f, j);
    estimates.push_back({{"estimate_id", "dyadic_low_pairing"},
                         {"grid_n", g.n},
                         {"j", rep.j},
                         {"skipped", rep.skipped},
                         {"lhs", rep.lhs_low},
                         {"rhs", rep.rhs_low}});
    estimates.push_back({{"estimate_id", "dyadic_high_pairing"},
                         {"grid_n", g.n},
                         {"j", rep.j},
                         {"skipped", rep.skipped},
                         {"lhs", rep.lhs_high},
                         {"rhs", rep.rhs_high}});
  }
  {
    const double lam_min = lambda_min_positive(setup.sd.lambda);
    const double lam_max = setup.sd.lambda.back();
    ResolventPairing pairing(setup.op,
                             balakrishnan_rule(lam_min, lam_max, 1.0, cfg.quad_nodes));
    Rng rng(cfg.sim_seed + 3);
    double max_gap = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      RVec f = random_band_limited_real(g, 16, rng);
      CVec u = random_band_limited_complex(g, 16, rng);
      CVec v = random_band_limited_complex(g, 16, rng);
      const cplx quad = pairing.pair(f, u, v);
      const cplx direct = direct_half_commutator_pairing(setup, f, u, v);
      CVec cv = matvec(commutator_matrix(f, setup.d), v);
      const double scale = std::max(l2_norm(g, u) * l2_norm(g, cv), 1e-300);
      max_gap = std::max(max_gap, std::abs(quad - direct) / scale);
    }
    estimates.push_back({{"estimate_id", "resolvent_integral_pairing"},
                         {"grid_n", g.n},
                         {"quad_nodes", cfg.quad_nodes},
                         {"trials", 10},
                         {"max_rel_gap", max_gap},
                         {"seed", cfg.sim_seed + 3}});
  }

  Emitter out(cfg.out_dir);
  if (cfg.format_json) {
    ordered_json rep;
    rep["estimates"] = estimates;
    out.add("commutator.json", json_string(rep));
  }
  out.write_all(config_hash(cfg), cfg.sim_seed);
}

SimulationConfig sim_config(const RunConfig& cfg, const Grid& g) {
  SimulationConfig sim;
  sim.grid = g;
  sim.coeff = cfg.coeff;
  sim.pot_singular = cfg.pot_singular;
  sim.pot_bounded = cfg.pot_bounded;
  sim.lorentz_q = cfg.lorentz_q;
  sim.theta = cfg.theta;
  sim.p = cfg.p;
  sim.dt = cfg.dt;
  sim.t_max = cfg.t_max;
  sim.blowup_threshold = cfg.blowup_threshold;
  sim.weight_a = cfg.weight_a;
  sim.seed = cfg.sim_seed;
  sim.cadence = cfg.cadence;
  return sim;
}

std::string trace_csv(const EvolutionTrace& tr) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    rows.push_back({tr.times[k], tr.mass[k], tr.lp1[k], tr.weighted_mass[k], tr.df_dt[k],
                    tr.rhs_lower[k], tr.linf[k]});
  return csv_string({"t", "mass", "lp1", "weighted_mass", "dF_dt_measured", "rhs_lower", "linf"},
                    rows);
}

ordered_json certificate_json(const ThresholdCertificate& cert, const EvolutionTrace* tr) {
  ordered_json rep;
  rep["lhs"] = cert.lhs;
  rep["rhs"] = cert.rhs;
  rep["C_emp"] = cert.c_emp;
  rep["A"] = cert.a_ode;
  rep["B"] = cert.b_ode;
  rep["t_bound"] = json_or_null(cert.t_bound);
  rep["predicted"] = cert.predicted;
  if (tr && tr->status == RunStatus::blown_up)
    rep["T_obs"] = tr->t_obs;
  else
    rep["T_obs"] = nullptr;
  return rep;
}

void run_simulate(const RunConfig& cfg) {
  Grid g = Grid::make(cfg.n, cfg.length);
  HalfOrderSetup setup = build_setup(cfg, g);
  const RVec w = bracket_weight(g, cfg.weight_a);
  const double c_emp = measure_c_emp(setup, w, cfg.sim_seed);

  SimulationConfig sim = sim_config(cfg, g);
  sim.u0 = gaussian_data(g, cfg.amplitude);
  sim.c_emp = c_emp;

  ThresholdCertificate cert = threshold_certificate(g, sim.u0, w, cfg.p, c_emp);
  EvolutionTrace tr = evolve(sim);
  InequalityAudit audit = weighted_mass_inequality_audit(tr);

  Emitter out(cfg.out_dir);
  if (cfg.format_csv) out.add("trace.csv", trace_csv(tr));
  if (cfg.format_json) {
    out.add("certificate.json", json_string(certificate_json(cert, &tr)));
    ordered_json run;
    run["status"] = tr.status == RunStatus::blown_up ? "blown_up" : "completed";
    if (tr.status == RunStatus::blown_up)
      run["t_obs"] = tr.t_obs;
    else
      run["t_obs"] = nullptr;
    run["rows"] = tr.times.size();
    run["audit"] = {{"checked", audit.checked}, {"satisfied", audit.satisfied}};
    run["ode"] = {{"a", tr.a_ode}, {"b", tr.b_ode}, {"q", tr.q_ode}};
    out.add("simulate.json", json_string(run));
  }
  out.write_all(config_hash(cfg), cfg.sim_seed);
}

void run_blowup_scan(const RunConfig& cfg) {
  Grid g = Grid::make(cfg.n, cfg.length);
  HalfOrderSetup setup = build_setup(cfg, g);
  const RVec w = bracket_weight(g, cfg.weight_a);
  const double c_emp = measure_c_emp(setup, w, cfg.sim_seed);

  ThresholdCertificate unit = threshold_certificate(g, gaussian_data(g, 1.0), w, cfg.p, c_emp);
  const double m_star_cert = std::sqrt(unit.rhs / unit.lhs);
  const double m_star_ode = std::sqrt(unit.rhs / unit.f0);

  const std::vector<double> factors{0.4, 0.7, 1.0, 1.2, 1.5, 2.0};
  std::vector<std::vector<double>> rows;
  ordered_json amp_rows = ordered_json::array();
  for (double factor : factors) {
    const double amplitude = factor * m_star_ode;
    CVec u0 = gaussian_data(g, amplitude);
    ThresholdCertificate cert = threshold_certificate(g, u0, w, cfg.p, c_emp);

    SimulationConfig sim = sim_config(cfg, g);
    sim.u0 = u0;
    sim.c_emp = c_emp;
    if (cert.t_bound) sim.t_max = 1.2 * *cert.t_bound;
    EvolutionTrace tr = evolve(sim);

    const double t_bound = cert.t_bound ? *cert.t_bound : -1.0;
    const double t_obs = tr.status == RunStatus::blown_up ? tr.t_obs : -1.0;
    rows.push_back({factor, amplitude, cert.lhs, cert.rhs, cert.predicted ? 1.0 : 0.0, t_bound,
                    t_obs, tr.status == RunStatus::blown_up ? 1.0 : 0.0});
    amp_rows.push_back({{"m_factor", factor},
                        {"amplitude", amplitude},
                        {"lhs", cert.lhs},
                        {"rhs", cert.rhs},
                        {"predicted", cert.predicted},
                        {"t_bound", json_or_null(cert.t_bound)},
                        {"t_obs", tr.status == RunStatus::blown_up ? ordered_json(tr.t_obs)
                                                                   : ordered_json(nullptr)},
                        {"blown_up", tr.status == RunStatus::blown_up}});
  }

  const double exponent = 0.5 * cfg.weight_a;
  RescalingScan scan = rescaling_scan(
      [exponent](double u) { return std::pow(1.0 + u * u, exponent); }, Grid::make(64, 16.0),
      {1.0, 2.0, 4.0}, cfg.p);

  Emitter out(cfg.out_dir);
  if (cfg.format_csv) {
    out.add("blowup_scan.csv",
            csv_string({"m_factor", "amplitude", "lhs", "rhs", "predicted", "t_bound", "t_obs",
                        "blown_up"},
                       rows));
    std::vector<std::vector<double>> rrows;
    for (const RescalingRow& row : scan.rows)
      rrows.push_back({row.r, row.a_emp, row.b, row.ratio});
    out.add("rescaling.csv", csv_string({"r", "a_emp", "b", "ratio"}, rrows));
  }
  if (cfg.format_json) {
    ordered_json rep;
    rep["m_star_certificate"] = m_star_cert;
    rep["m_star_ode"] = m_star_ode;
    rep["C_emp"] = c_emp;
    rep["amplitudes"] = amp_rows;
    rep["rescaling"] = {{"slope", scan.slope},
                        {"theory_slope", -1.0 + 0.5 * (cfg.p - 1.0)}};
    out.add("scan.json", json_string(rep));
  }
  out.write_all(config_hash(cfg), cfg.sim_seed);
}

int run_verify(const RunConfig& cfg) {
  std::vector<SuiteResult> results = run_property_suites(cfg);
  int total_passed = 0, total_failed = 0;
  ordered_json suites = ordered_json::array();
  ordered_json manifest_suites = ordered_json::array();
  for (const SuiteResult& r : results) {
    total_passed += r.passed;
    total_failed += r.failed;
    suites.push_back(
        {{"name", r.name}, {"passed", r.passed}, {"failed", r.failed}, {"notes", r.notes}});
    manifest_suites.push_back({{"name", r.name}, {"passed", r.passed}, {"failed", r.failed}});
  }
  ordered_json rep;
  rep["suites"] = suites;
  rep["total_passed"] = total_passed;
  rep["total_failed"] = total_failed;

  Emitter out(cfg.out_dir);
  out.add("verify.json", json_string(rep));
  out.write_all(config_hash(cfg), cfg.sim_seed, &manifest_suites);

  if (total_failed > 0) {
    print_error("property", {std::to_string(total_failed) + " checks failed; see " +
                             (out.dir() / "verify.json").string()});
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for a rough-metric dispersive model"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  std::vector<std::string> sets;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"spectrum", "eigendecomposition and operator assumption report"},
      {"fracpow", "fractional power by eigenbasis and by resolvent integral"},
      {"besov", "dyadic norms, weight scan, second-difference norm"},
      {"commutator", "commutator estimate measurements"},
      {"simulate", "time evolution with diagnostics and threshold certificate"},
      {"blowup-scan", "amplitude threshold sweep and rescaling scan"},
      {"verify", "full property suite; nonzero exit on any failure"}};
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "path to a run configuration file");
    sub->add_option("--set", sets, "override one key, e.g. --set sim.p=2.5");
    sub->add_option("--out", out_override, "output directory (overrides output.dir)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("config", {e.what()});
    return 2;
  }

  try {
    const RunConfig cfg = load_config(config_path, sets, out_override);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "spectrum") run_spectrum(cfg);
    else if (name == "fracpow") run_fracpow(cfg);
    else if (name == "besov") run_besov(cfg);
    else if (name == "commutator") run_commutator(cfg);
    else if (name == "simulate") run_simulate(cfg);
    else if (name == "blowup-scan") run_blowup_scan(cfg);
    else if (name == "verify") return run_verify(cfg);
    return 0;
  } catch (const ConfigError& e) {
    print_error("config", e.messages);
    return 2;
  } catch (const NumericalError& e) {
    print_error("numerical", {e.what()});
    return 3;
  } catch (const std::invalid_argument& e) {
    print_error("config", {e.what()});
    return 2;
  } catch (const std::exception& e) {
    print_error("numerical", {e.what()});
    return 3;
  }
}
