#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "hglk/config.hpp"
#include "hglk/io.hpp"
#include "json.hpp"

using namespace hglk;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool has_message(const std::vector<std::string>& msgs, const std::string& needle) {
  for (const std::string& m : msgs)
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("hglk_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct CliRun {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CliRun run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path log = scratch / "cli_output.txt";
  const std::string cmd = std::string(HGLK_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.output = slurp(log);
  return r;
}

// Every emitted file except the manifest must be listed with a matching
// content hash, and nothing else may be listed.
void check_manifest_complete(const fs::path& dir) {
  const fs::path mpath = dir / "manifest.json";
  ASSERT_TRUE(fs::exists(mpath));
  json manifest = json::parse(slurp(mpath));
  ASSERT_TRUE(manifest.contains("config_hash"));
  ASSERT_TRUE(manifest.contains("seed"));
  ASSERT_TRUE(manifest.contains("files"));

  std::map<std::string, std::string> listed;
  for (const auto& entry : manifest["files"])
    listed[entry["name"].get<std::string>()] = entry["fnv1a64"].get<std::string>();

  std::map<std::string, std::string> on_disk;
  for (const auto& de : fs::directory_iterator(dir)) {
    const std::string name = de.path().filename().string();
    if (name == "manifest.json" || name == "cli_output.txt") continue;
    on_disk[name] = fnv1a64_hex(slurp(de.path()));
  }
  EXPECT_EQ(listed.size(), on_disk.size());
  for (const auto& [name, hash] : on_disk) {
    ASSERT_TRUE(listed.count(name)) << "unlisted file " << name;
    EXPECT_EQ(listed[name], hash) << "hash mismatch for " << name;
  }
}

}  // namespace

TEST(ConfigParse, DefaultsSurviveEmptyText) {
  ConfigResult res = parse_config("");
  EXPECT_TRUE(res.errors.empty());
  EXPECT_EQ(res.config.n, 64);
  EXPECT_DOUBLE_EQ(res.config.length, 8.0);
  EXPECT_EQ(res.config.coeff.kind, CoeffKind::constant);
  EXPECT_EQ(res.config.pot_singular.kind, PotKind::zero);
  EXPECT_EQ(res.config.pot_bounded.kind, PotKind::zero);
  EXPECT_DOUBLE_EQ(res.config.s, 1.0);
  EXPECT_EQ(res.config.quad_nodes, 400);
  EXPECT_DOUBLE_EQ(res.config.p, 2.0);
  EXPECT_DOUBLE_EQ(res.config.weight_a, 0.7);
  EXPECT_EQ(res.config.out_dir, "out");
  EXPECT_TRUE(res.config.format_csv);
  EXPECT_TRUE(res.config.format_json);
  EXPECT_TRUE(validate_config(res.config).empty());
}

TEST(ConfigParse, ReadsAllSections) {
  const std::string text =
      "# experiment on a rough metric\n"
      "[grid]\n"
      "n = 128\n"
      "length = 16.0\n"
      "\n"
      "[coeff]\n"
      "family = random_lipschitz   # seeded piecewise-linear metric\n"
      "base = 1.0\n"
      "amplitude = 0.4\n"
      "knots = 12\n"
      "seed = 7\n"
      "\n"
      "[potential]\n"
      "singular = inverse_power\n"
      "bounded = seeded_noise\n"
      "vmax = 25.0\n"
      "depth = 0.4\n"
      "knots = 24\n"
      "q = 3.5\n"
      "theta = 0.4\n"
      "seed = 11\n"
      "\n"
      "[frac]\n"
      "s = 0.5\n"
      "quad_nodes = 200\n"
      "\n"
      "[sim]\n"
      "p = 2.5\n"
      "dt = 0.0005\n"
      "t_max = 0.25\n"
      "blowup_threshold = 1e6\n"
      "weight_a = 0.8\n"
      "amplitude = 3.0\n"
      "cadence = 2\n"
      "seed = 13\n"
      "\n"
      "[output]\n"
      "dir = results\n"
      "formats = csv,json\n";
  ConfigResult res = parse_config(text);
  ASSERT_TRUE(res.errors.empty()) << res.errors.front();
  const RunConfig& c = res.config;
  EXPECT_EQ(c.n, 128);
  EXPECT_DOUBLE_EQ(c.length, 16.0);
  EXPECT_EQ(c.coeff.kind, CoeffKind::random_lipschitz);
  EXPECT_DOUBLE_EQ(c.coeff.amplitude, 0.4);
  EXPECT_EQ(c.coeff.knots, 12);
  EXPECT_EQ(c.coeff.seed, 7u);
  EXPECT_EQ(c.pot_singular.kind, PotKind::inverse_power);
  EXPECT_DOUBLE_EQ(c.pot_singular.vmax, 25.0);
  EXPECT_EQ(c.pot_bounded.kind, PotKind::seeded_noise);
  EXPECT_DOUBLE_EQ(c.pot_bounded.depth, 0.4);
  EXPECT_EQ(c.pot_bounded.knots, 24);
  EXPECT_EQ(c.pot_bounded.seed, 11u);
  EXPECT_DOUBLE_EQ(c.lorentz_q, 3.5);
  EXPECT_DOUBLE_EQ(c.theta, 0.4);
  EXPECT_DOUBLE_EQ(c.s, 0.5);
  EXPECT_EQ(c.quad_nodes, 200);
  EXPECT_DOUBLE_EQ(c.p, 2.5);
  EXPECT_DOUBLE_EQ(c.dt, 0.0005);
  EXPECT_DOUBLE_EQ(c.t_max, 0.25);
  EXPECT_DOUBLE_EQ(c.blowup_threshold, 1e6);
  EXPECT_DOUBLE_EQ(c.weight_a, 0.8);
  EXPECT_DOUBLE_EQ(c.amplitude, 3.0);
  EXPECT_EQ(c.cadence, 2);
  EXPECT_EQ(c.sim_seed, 13u);
  EXPECT_EQ(c.out_dir, "results");
  EXPECT_TRUE(validate_config(c).empty());
}

TEST(ConfigParse, AggregatesErrorsAcrossSections) {
  const std::string text =
      "[grid]\n"
      "n = 100\n"
      "[frac]\n"
      "s = 3.0\n"
      "[sim]\n"
      "p = 0.5\n"
      "weight_a = 0.2\n"
      "dt = -1\n";
  ConfigResult res = parse_config(text);
  ASSERT_TRUE(res.errors.empty());
  std::vector<std::string> errors = validate_config(res.config);
  EXPECT_GE(errors.size(), 5u);
  EXPECT_TRUE(has_message(errors, "p > 1 required"));
  EXPECT_TRUE(has_message(errors, "grid.n"));
  EXPECT_TRUE(has_message(errors, "frac.s"));
  EXPECT_TRUE(has_message(errors, "sim.weight_a"));
  EXPECT_TRUE(has_message(errors, "sim.dt"));
}

TEST(ConfigParse, RejectsUnknownKeysAndSections) {
  ConfigResult res = parse_config(
      "[grid]\n"
      "n = 64\n"
      "bogus = 1\n"
      "[mystery]\n"
      "x = 2\n");
  EXPECT_GE(res.errors.size(), 2u);
  EXPECT_TRUE(has_message(res.errors, "unknown key"));
  EXPECT_TRUE(has_message(res.errors, "unknown section"));
}

TEST(ConfigParse, RejectsMalformedLineWithLineNumber) {
  ConfigResult res = parse_config("[grid]\nn 64\n");
  ASSERT_EQ(res.errors.size(), 1u);
  EXPECT_TRUE(has_message(res.errors, "line 2"));
}

TEST(ConfigParse, RejectsBadNumericLiteral) {
  ConfigResult res = parse_config("[sim]\np = fast\n");
  ASSERT_GE(res.errors.size(), 1u);
  EXPECT_TRUE(has_message(res.errors, "sim.p"));
}

TEST(ConfigParse, SetOverrideChangesValueAndHash) {
  ConfigResult res = parse_config("");
  ASSERT_TRUE(res.errors.empty());
  const std::string before = config_canonical_string(res.config);

  std::vector<std::string> errors;
  EXPECT_TRUE(set_config_key(res.config, "sim.p", "2.5", errors));
  EXPECT_TRUE(errors.empty());
  EXPECT_DOUBLE_EQ(res.config.p, 2.5);
  const std::string after = config_canonical_string(res.config);
  EXPECT_NE(fnv1a64(before), fnv1a64(after));

  EXPECT_FALSE(set_config_key(res.config, "sim.nonsense", "1", errors));
  EXPECT_TRUE(has_message(errors, "unknown key"));
}

TEST(ConfigParse, CanonicalFormIgnoresFormatting) {
  ConfigResult a = parse_config("[sim]\np = 2.5\n[grid]\nn = 128\n");
  ConfigResult b = parse_config(
      "# comment\n"
      "[grid]\n"
      "n   =    128\n"
      "\n"
      "[sim]\n"
      "p=2.5\n");
  ASSERT_TRUE(a.errors.empty());
  ASSERT_TRUE(b.errors.empty());
  EXPECT_EQ(config_canonical_string(a.config), config_canonical_string(b.config));
}

TEST(IoFormat, FnvKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a64_hex("a"), "af63dc4c8601ec8c");
}

TEST(IoFormat, CsvShortestRoundTrip) {
  const std::vector<std::string> cols{"t", "v"};
  const std::vector<std::vector<double>> rows{{0.5, 2.0}, {0.1, 1e8}};
  EXPECT_EQ(csv_string(cols, rows), "t,v\n0.5,2\n0.1,1e+08\n");
  EXPECT_EQ(format_double(-3.25), "-3.25");
  EXPECT_EQ(format_double(0.0), "0");
}

TEST(CliBinary, MalformedConfigExitsTwoCitingP) {
  fs::path dir = fresh_dir("badp");
  spit(dir / "bad.ini", "[sim]\np = 0.5\nweight_a = 0.2\n");
  CliRun r = run_cli("simulate --config " + (dir / "bad.ini").string() + " --out " +
                         (dir / "out").string(),
                     dir);
  EXPECT_EQ(r.exit_code, 2);
  json err = json::parse(r.output);
  EXPECT_EQ(err["error"]["kind"], "config");
  ASSERT_GE(err["error"]["messages"].size(), 2u);
  bool cited = false;
  for (const auto& m : err["error"]["messages"])
    if (m.get<std::string>().find("p > 1 required") != std::string::npos) cited = true;
  EXPECT_TRUE(cited);
}

TEST(CliBinary, SetOverrideHitsValidationPath) {
  fs::path dir = fresh_dir("setp");
  CliRun r = run_cli("simulate --set sim.p=0.5 --out " + (dir / "out").string(), dir);
  EXPECT_EQ(r.exit_code, 2);
  json err = json::parse(r.output);
  EXPECT_EQ(err["error"]["kind"], "config");
}

TEST(CliBinary, UnknownSubcommandExitsTwo) {
  fs::path dir = fresh_dir("unknown");
  CliRun r = run_cli("frobnicate", dir);
  EXPECT_EQ(r.exit_code, 2);
  json err = json::parse(r.output);
  EXPECT_EQ(err["error"]["kind"], "config");
}

TEST(CliBinary, SpectrumWritesAscendingSpectrumAndManifest) {
  fs::path dir = fresh_dir("spectrum");
  fs::path out = dir / "out";
  CliRun r = run_cli("spectrum --set grid.n=64 --out " + out.string(), dir);
  ASSERT_EQ(r.exit_code, 0) << r.output;

  const std::string csv = slurp(out / "spectrum.csv");
  std::istringstream lines(csv);
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line, "k,lambda");
  double prev = -1e300, lam_max = 0.0;
  int count = 0;
  std::vector<double> lambda;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    ASSERT_NE(comma, std::string::npos);
    const double lam = std::stod(line.substr(comma + 1));
    EXPECT_GE(lam, prev - 1e-12);
    prev = lam;
    lam_max = std::max(lam_max, std::fabs(lam));
    lambda.push_back(lam);
    ++count;
  }
  EXPECT_EQ(count, 64);
  EXPECT_GE(lambda.front(), -1e-10 * lam_max);

  json assumptions = json::parse(slurp(out / "assumptions.json"));
  EXPECT_GT(assumptions["ellipticity"]["c1"].get<double>(), 0.0);
  EXPECT_TRUE(assumptions["nonnegative_form"].get<bool>());
  check_manifest_complete(out);
}

TEST(CliBinary, SimulateLargeDataBlowsUpWithCompleteManifest) {
  fs::path dir = fresh_dir("simblow");
  spit(dir / "blow.ini",
       "[grid]\n"
       "n = 64\n"
       "length = 16.0\n"
       "[sim]\n"
       "p = 2.0\n"
       "dt = 0.001\n"
       "t_max = 2.0\n"
       "amplitude = 12.0\n");
  fs::path out = dir / "out";
  CliRun r = run_cli("simulate --config " + (dir / "blow.ini").string() + " --out " + out.string(),
                     dir);
  ASSERT_EQ(r.exit_code, 0) << r.output;

  json run = json::parse(slurp(out / "simulate.json"));
  EXPECT_EQ(run["status"], "blown_up");
  EXPECT_TRUE(run["t_obs"].is_number());

  json cert = json::parse(slurp(out / "certificate.json"));
  EXPECT_TRUE(cert["predicted"].get<bool>());
  EXPECT_GT(cert["lhs"].get<double>(), cert["rhs"].get<double>());
  EXPECT_TRUE(cert["t_bound"].is_number());
  EXPECT_TRUE(cert["T_obs"].is_number());
  EXPECT_GT(cert["C_emp"].get<double>(), 0.0);

  const std::string trace = slurp(out / "trace.csv");
  std::istringstream lines(trace);
  std::string header;
  ASSERT_TRUE(std::getline(lines, header));
  EXPECT_EQ(header, "t,mass,lp1,weighted_mass,dF_dt_measured,rhs_lower,linf");
  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) ++rows;
  EXPECT_GE(rows, 2);
  check_manifest_complete(out);
}

TEST(CliBinary, VerifyDefaultTwiceByteIdentical) {
  fs::path dir = fresh_dir("verify");
  fs::path out1 = dir / "run1";
  fs::path out2 = dir / "run2";
  CliRun r1 = run_cli("verify --out " + out1.string(), dir);
  ASSERT_EQ(r1.exit_code, 0) << r1.output;
  EXPECT_TRUE(r1.output.empty());
  CliRun r2 = run_cli("verify --out " + out2.string(), dir);
  ASSERT_EQ(r2.exit_code, 0) << r2.output;

  std::map<std::string, std::string> first, second;
  for (const auto& de : fs::directory_iterator(out1))
    first[de.path().filename().string()] = slurp(de.path());
  for (const auto& de : fs::directory_iterator(out2))
    second[de.path().filename().string()] = slurp(de.path());
  ASSERT_FALSE(first.empty());
  ASSERT_EQ(first.size(), second.size());
  for (const auto& [name, bytes] : first) {
    ASSERT_TRUE(second.count(name)) << name;
    EXPECT_EQ(bytes, second[name]) << "byte mismatch in " << name;
  }

  json report = json::parse(first.at("verify.json"));
  ASSERT_GE(report["suites"].size(), 8u);
  for (const auto& suite : report["suites"]) {
    EXPECT_GT(suite["passed"].get<int>(), 0) << suite["name"];
    EXPECT_EQ(suite["failed"].get<int>(), 0) << suite["name"];
  }
  EXPECT_EQ(report["total_failed"].get<int>(), 0);

  json manifest = json::parse(first.at("manifest.json"));
  ASSERT_TRUE(manifest.contains("suites"));
  EXPECT_EQ(manifest["suites"].size(), report["suites"].size());
  check_manifest_complete(out1);
}
