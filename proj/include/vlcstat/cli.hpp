#ifndef VLCSTAT_CLI_HPP
#define VLCSTAT_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlcstat/csv.hpp"
#include "vlcstat/metrics.hpp"
#include "vlcstat/monte_carlo.hpp"
#include "vlcstat/scenario.hpp"

namespace vlcstat {

inline constexpr const char* kToolVersion = "0.1.0";

namespace cli_detail {

inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunContext {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::string config_text;
  ScenarioConfig cfg;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> samples_override;
  int grid_points = 512;
  bool dump_samples = false;

  std::uint64_t seed() const { return seed_override ? *seed_override : cfg.mc.seed; }
  std::size_t samples() const { return samples_override ? *samples_override : cfg.mc.samples; }

  nlohmann::json manifest(const std::string& command,
                          const std::vector<std::string>& outputs) const {
    nlohmann::json m;
    m["command"] = command;
    m["config_path"] = config_path.string();
    m["config_hash"] = fnv1a_hex(config_text);
    m["seed"] = seed();
    m["version"] = kToolVersion;
    m["method"] = law_method_name(cfg);
    m["outputs"] = outputs;
    return m;
  }

  void write_manifest(const std::string& command, nlohmann::json m) const {
    std::ofstream out(out_dir / (command + "_manifest.json"));
    if (!out) throw ConfigError("cannot write manifest in " + out_dir.string());
    out << m.dump(2) << "\n";
  }
};

inline RunContext load_context(const std::string& config, const std::string& out,
                               std::optional<std::uint64_t> seed,
                               std::optional<std::size_t> samples, int grid_points,
                               bool dump_samples) {
  RunContext ctx;
  ctx.config_path = config;
  ctx.out_dir = out;
  std::ifstream in(ctx.config_path);
  if (!in) throw ConfigError("cannot read config file " + config);
  std::stringstream buf;
  buf << in.rdbuf();
  ctx.config_text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ctx.config_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ctx.cfg = parse_scenario(j);
  ctx.seed_override = seed;
  ctx.samples_override = samples;
  ctx.grid_points = grid_points;
  ctx.dump_samples = dump_samples;
  std::filesystem::create_directories(ctx.out_dir);
  return ctx;
}

inline std::vector<double> law_grid(const SquareChannelLaw& law, int points) {
  if (points < 2) throw ConfigError("grid-points must be >= 2");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = law.x_lo + (law.x_hi - law.x_lo) * i / double(points - 1);
  return g;
}

inline void run_pdf(const RunContext& ctx, bool cdf_mode) {
  const SquareChannelLaw law = build_law(ctx.cfg);
  const std::string name = cdf_mode ? "cdf" : "pdf";
  std::vector<double> xs = law_grid(law, ctx.grid_points);
  if (cdf_mode) xs.insert(xs.begin(), 0.0);  // show the atom at the origin
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (const double x : xs) ys.push_back(cdf_mode ? law.cdf_at(x) : law.pdf_at(x));
  emit_csv({{"x", xs}, {name, ys}}, ctx.out_dir / (name + ".csv"));
  nlohmann::json m = ctx.manifest(name, {name + ".csv"});
  m["atom_mass"] = law.atom_mass;
  m["support"] = {law.x_lo, law.x_hi};
  m["warnings"] = law.warnings;
  ctx.write_manifest(name, std::move(m));
}

inline void run_ber(const RunContext& ctx) {
  if (!ctx.cfg.snr_grid) throw ConfigError("ber: config needs an 'snr_db' grid");
  const SquareChannelLaw law = build_law(ctx.cfg);
  const BerCurve curve = ber_curve(law, ctx.cfg.snr_grid->values());
  emit_csv({{"snr_db", curve.snr_db}, {"ber", curve.ber}}, ctx.out_dir / "ber.csv");
  nlohmann::json m = ctx.manifest("ber", {"ber.csv"});
  m["atom_mass"] = law.atom_mass;
  m["ber_floor"] = law.atom_mass / 2.0;
  m["warnings"] = law.warnings;
  ctx.write_manifest("ber", std::move(m));
}

inline void run_outage(const RunContext& ctx) {
  if (!ctx.cfg.threshold_grid) throw ConfigError("outage: config needs a 'thresholds' grid");
  const SquareChannelLaw law = build_law(ctx.cfg);
  const OutageCurve curve = outage_of_law(law, ctx.cfg.threshold_grid->values());
  emit_csv({{"threshold", curve.threshold}, {"outage", curve.outage}},
           ctx.out_dir / "outage.csv");
  nlohmann::json m = ctx.manifest("outage", {"outage.csv"});
  m["atom_mass"] = law.atom_mass;
  m["warnings"] = law.warnings;
  ctx.write_manifest("outage", std::move(m));
}

inline void run_mc_verify(const RunContext& ctx) {
  const SquareChannelLaw law = build_law(ctx.cfg);
  RandomStream rs(ctx.seed());
  const EmpiricalLaw emp = sample_sq_channel(ctx.cfg, ctx.samples(), rs);
  const double ks = ks_distance(law, emp);
  nlohmann::json r;
  r["ks"] = ks;
  r["pass"] = ks < 0.005;
  r["zero_fraction"] = emp.zero_fraction;
  r["atom_mass"] = law.atom_mass;
  r["samples"] = ctx.samples();
  r["seed"] = ctx.seed();
  {
    std::ofstream out(ctx.out_dir / "mc_verify.json");
    if (!out) throw ConfigError("cannot write mc_verify.json");
    out << r.dump(2) << "\n";
  }
  std::vector<std::string> outputs = {"mc_verify.json"};
  if (ctx.dump_samples) {
    std::ofstream out(ctx.out_dir / "samples.csv");
    if (!out) throw ConfigError("cannot write samples.csv");
    for (const double v : emp.sorted_samples) out << format_double(v) << "\n";
    outputs.push_back("samples.csv");
  }
  nlohmann::json m = ctx.manifest("mc-verify", outputs);
  m["samples"] = ctx.samples();
  m["warnings"] = law.warnings;
  ctx.write_manifest("mc_verify", std::move(m));
}

inline void run_regions(const RunContext& ctx) {
  if (ctx.cfg.kind != ScenarioKind::multi_led)
    throw ConfigError("regions: requires a multi_led scenario");
  const LinearArrayScenario arr = to_array_scenario(ctx.cfg);
  const MultiLedSettings& ms = ctx.cfg.multi;

  std::vector<double> grid(ms.resolution + 1);
  for (int i = 0; i <= ms.resolution; ++i)
    grid[i] = ms.phi_lo + (ms.phi_hi - ms.phi_lo) * i / double(ms.resolution);
  const GainSweep sweep = gain_sweep(arr, grid);
  std::vector<CsvColumn> cols{{"phi_deg", sweep.phi_deg}};
  for (int led = 1; led <= arr.n_leds; ++led)
    cols.push_back({"gain_led_" + std::to_string(led), sweep.gains[led - 1]});
  emit_csv(cols, ctx.out_dir / "gains.csv");

  const RegionPartition part = region_partition(arr, ms.phi_lo, ms.phi_hi, ms.resolution);
  nlohmann::json r;
  r["phi_range"] = {part.phi_lo, part.phi_hi};
  r["boundaries"] = part.boundaries;
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& [s, t] : part.labels) labels.push_back({s, t});
  r["labels"] = labels;
  {
    std::ofstream out(ctx.out_dir / "regions.json");
    if (!out) throw ConfigError("cannot write regions.json");
    out << r.dump(2) << "\n";
  }
  ctx.write_manifest("regions", ctx.manifest("regions", {"gains.csv", "regions.json"}));
}

}  // namespace cli_detail

/// Subcommand driver. Exit codes: 0 success, 2 configuration error,
/// 3 numerical failure.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Statistics of VLC downlink channel gain under random receiver "
               "orientation and location"};
  app.require_subcommand(1);

  std::string config, out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  int grid_points = 512;

  app.add_option("--config", config, "scenario config JSON")->required();
  app.add_option("--out", out, "output directory");
  std::uint64_t seed_raw = 0;
  auto* seed_opt = app.add_option("--seed", seed_raw, "override the Monte Carlo seed");
  std::size_t samples_raw = 0;
  auto* samples_opt =
      app.add_option("--samples", samples_raw, "override the Monte Carlo sample count");
  app.add_option("--grid-points", grid_points, "points in pdf/cdf output grids");
  bool dump_samples = false;
  app.add_flag("--dump-samples", dump_samples,
               "with mc-verify, also write the raw squared gains (one per line)");

  auto* c_pdf = app.add_subcommand("pdf", "density of the squared channel gain");
  auto* c_cdf = app.add_subcommand("cdf", "cdf of the squared channel gain");
  auto* c_ber = app.add_subcommand("ber", "average OOK bit-error rate over the SNR grid");
  auto* c_outage = app.add_subcommand("outage", "outage probability over the threshold grid");
  auto* c_mc = app.add_subcommand("mc-verify", "Monte Carlo agreement check");
  auto* c_regions = app.add_subcommand("regions", "linear-array gain sweep and regions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (seed_opt->count() > 0) seed = seed_raw;
    if (samples_opt->count() > 0) samples = samples_raw;
    const cli_detail::RunContext ctx =
        cli_detail::load_context(config, out, seed, samples, grid_points, dump_samples);
    if (c_pdf->parsed()) cli_detail::run_pdf(ctx, false);
    if (c_cdf->parsed()) cli_detail::run_pdf(ctx, true);
    if (c_ber->parsed()) cli_detail::run_ber(ctx);
    if (c_outage->parsed()) cli_detail::run_outage(ctx);
    if (c_mc->parsed()) cli_detail::run_mc_verify(ctx);
    if (c_regions->parsed()) cli_detail::run_regions(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

inline int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("vlcstat");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace vlcstat

#endif  // VLCSTAT_CLI_HPP
