// kerrgauge: campaign runner for gauged phase-space simulations of the Kerr
// oscillator.
//
//   kerrgauge run      --config run.cfg --out results/ [--with-oracle] [--threads N] [--seed S]
//   kerrgauge sweep    --config run.cfg --out results/ --sweep mu=0,1,0.01
//   kerrgauge compare  --out results/ a.csv b.csv ...
//   kerrgauge selftest
//
// A manifest.json written by run or sweep is accepted as --config and
// reproduces the original outputs.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kerrgauge/campaign.hpp"
#include "kerrgauge/errors.hpp"
#include "kerrgauge/selftest.hpp"

namespace {

using namespace kerrgauge;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::string sweep_spec;
  bool with_oracle = false;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
};

struct LoadedConfig {
  SimConfig config;
  std::optional<nlohmann::json> sweep;  ///< present when loaded from a sweep manifest
};

LoadedConfig load(const Options& opt) {
  if (opt.config_path.empty()) throw ConfigError("--config is required");
  LoadedConfig loaded;
  if (opt.config_path.size() > 5 &&
      opt.config_path.compare(opt.config_path.size() - 5, 5, ".json") == 0) {
    std::ifstream in(opt.config_path);
    if (!in) throw IoError("cannot open '" + opt.config_path + "'");
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
    }
    loaded.config = config_from_json(manifest.at("config"));
    if (manifest.contains("sweep")) loaded.sweep = manifest.at("sweep");
  } else {
    loaded.config = load_config(opt.config_path);
  }
  if (opt.with_oracle) loaded.config.with_oracle = true;
  if (opt.seed) loaded.config.master_seed = *opt.seed;
  return loaded;
}

std::pair<SweepAxis, std::vector<double>> parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("--sweep expects <axis>=<v1,v2,...>");
  const SweepAxis axis = parse_sweep_axis(spec.substr(0, eq));
  std::vector<double> values;
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("bad sweep value '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("--sweep needs at least one value");
  return {axis, values};
}

void print_flags(const std::vector<ObservableSeries>& series) {
  for (const auto& s : series) {
    for (const auto& f : flag_systematic_error(s)) {
      std::printf("systematic-error suspect: %s %s t=%.6g |mean-oracle| = %.2f stderr\n",
                  s.label.c_str(), std::string(to_string(s.kind)).c_str(), f.t, f.deviation);
    }
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const Options& opt) {
  const auto loaded = load(opt);
  const auto start = std::chrono::steady_clock::now();
  const auto result = run_campaign(loaded.config, opt.threads);
  const auto files = emit_outputs(result, opt.out_dir, seconds_since(start));
  for (const auto& f : files.csv) std::printf("wrote %s\n", f.string().c_str());
  print_flags(result.series);
  return 0;
}

int cmd_sweep(const Options& opt) {
  const auto loaded = load(opt);
  SweepAxis axis{};
  std::vector<double> values;
  if (!opt.sweep_spec.empty()) {
    std::tie(axis, values) = parse_sweep(opt.sweep_spec);
  } else if (loaded.sweep) {
    axis = parse_sweep_axis(loaded.sweep->at("axis").get<std::string>());
    values = loaded.sweep->at("values").get<std::vector<double>>();
  } else {
    throw ConfigError("sweep needs --sweep <axis>=<values> or a sweep manifest");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto result = sweep(loaded.config, axis, values, opt.threads);
  const auto files = emit_sweep_outputs(result, opt.out_dir, seconds_since(start));
  for (const auto& f : files.csv) std::printf("wrote %s\n", f.string().c_str());
  for (const auto& p : result.points) print_flags(p.result.series);
  return 0;
}

int cmd_compare(const Options& opt) {
  if (opt.inputs.size() < 2) throw ConfigError("compare needs at least two CSV files");
  std::vector<ObservableSeries> series;
  for (const auto& path : opt.inputs) series.push_back(read_series_csv(path));
  const auto table = compare_series(series, 0);
  const auto path = std::filesystem::path(opt.out_dir) / "comparison.csv";
  write_file_atomic(path, comparison_to_csv(table));
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_selftest() {
  bool ok = true;
  for (const auto& c : run_selftest()) {
    std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauged phase-space simulation of the Kerr oscillator"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Config file (key = value) or manifest.json");
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_flag("--with-oracle", opt.with_oracle, "Attach exact oracle values");
    sub->add_option("--threads", opt.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "Override master_seed");
  };

  auto* run = app.add_subcommand("run", "Run a single campaign");
  add_common(run);
  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep");
  add_common(sw);
  sw->add_option("--sweep", opt.sweep_spec, "<axis>=<v1,v2,...> with axis in {mu, n_traj, dt}");
  auto* cmp = app.add_subcommand("compare", "Variance-ratio table from series CSVs");
  cmp->add_option("--out", opt.out_dir, "Output directory");
  cmp->add_option("inputs", opt.inputs, "Series CSV files; the first is the reference")->required();
  auto* self = app.add_subcommand("selftest", "Oracle cross-checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(opt);
    if (*sw) return cmd_sweep(opt);
    if (*cmp) return cmd_compare(opt);
    if (*self) return cmd_selftest();
  } catch (const kerrgauge::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const kerrgauge::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
