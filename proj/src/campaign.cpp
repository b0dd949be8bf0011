#include "kerrgauge/campaign.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kerrgauge/errors.hpp"
#include "kerrgauge/oracle.hpp"
#include "kerrgauge/random.hpp"
#include "kerrgauge/version.hpp"

namespace kerrgauge {
namespace {

constexpr const char* kCsvHeader =
    "t,mean,variance,stderr,imag_residual,discard_fraction,theta_spread,oracle";

constexpr const char* kTrajectoryNoiseRule =
    "step j of trajectory k: Philox4x32-10, key = (seed low 32, seed high 32), "
    "counter = (j low, j high, k low, k high); Box-Muller on the two 64-bit uniforms "
    "gives (dW, dWbar) / sqrt(dt)";

constexpr const char* kSweepSeedRule =
    "seed_i = mix64(mix64(master_seed ^ fnv1a64(axis)) + i), mix64 = SplitMix64 finalizer";

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_field(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) throw ConfigError("malformed CSV number '" + text + "'");
  return v;
}

std::string point_label(SweepAxis axis, double value) {
  return std::string(to_string(axis)) + "=" + fmt(value);
}

nlohmann::json report_json(const std::vector<ObservableSeries>& series) {
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& s : series) {
    for (const auto& f : flag_systematic_error(s)) {
      flags.push_back({{"label", s.label},
                       {"observable", std::string(to_string(s.kind))},
                       {"t", f.t},
                       {"deviation_in_stderr", f.deviation}});
    }
  }
  return {{"threshold_stderr", kBiasFlagSigmas}, {"systematic_error_suspects", flags}};
}

}  // namespace

std::vector<ObservableSeries> to_series(const EnsembleStatistics& stats, cplx alpha0,
                                        bool with_oracle, const std::string& label) {
  std::vector<ObservableSeries> out;
  for (std::size_t o = 0; o < stats.observables.size(); ++o) {
    ObservableSeries s{label, stats.observables[o], {}};
    s.rows.reserve(stats.times.size());
    for (std::size_t i = 0; i < stats.times.size(); ++i) {
      const auto& p = stats.points[i];
      SeriesRow row;
      row.t = stats.times[i];
      row.mean = p.values[o].mean();
      row.variance = p.values[o].variance();
      row.standard_error = p.values[o].standard_error();
      row.imag_residual = p.imag_residuals[o].mean();
      row.discard_fraction = p.discard_fraction();
      if (auto v = p.theta_tilde.variance()) row.theta_spread = std::sqrt(*v);
      if (with_oracle) row.oracle = oracle::exact_observable(s.kind, alpha0, row.t);
      s.rows.push_back(row);
    }
    out.push_back(std::move(s));
  }
  return out;
}

CampaignResult run_campaign(const SimConfig& config, unsigned threads) {
  const RunSpec spec = config.to_run_spec(threads);
  const auto stats = run_statistics(spec);
  return {config, to_series(stats, config.alpha0, config.with_oracle, "run")};
}

std::vector<BiasFlag> flag_systematic_error(const ObservableSeries& series, double threshold) {
  std::vector<BiasFlag> flags;
  for (const auto& row : series.rows) {
    if (!row.oracle || !row.standard_error) continue;
    const double gap = std::abs(row.mean - *row.oracle);
    const double se = *row.standard_error;
    if (!std::isfinite(gap)) {
      flags.push_back({row.t, std::numeric_limits<double>::infinity()});
    } else if (gap > threshold * se) {
      flags.push_back({row.t, se > 0.0 ? gap / se : std::numeric_limits<double>::infinity()});
    }
  }
  return flags;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Mu:
      return "mu";
    case SweepAxis::NTraj:
      return "n_traj";
    case SweepAxis::Dt:
      return "dt";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "mu") return SweepAxis::Mu;
  if (text == "n_traj") return SweepAxis::NTraj;
  if (text == "dt") return SweepAxis::Dt;
  throw ConfigError("unknown sweep axis '" + std::string(text) + "' (mu, n_traj or dt)");
}

SimConfig sweep_point_config(const SimConfig& base, SweepAxis axis, double value,
                             std::size_t index) {
  SimConfig c = base;
  switch (axis) {
    case SweepAxis::Mu:
      c.gauge = value == 0.0 ? GaugeSpec::positive_p() : GaugeSpec::mu(value);
      break;
    case SweepAxis::NTraj:
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw ConfigError("n_traj sweep values must be positive integers");
      }
      c.n_traj = static_cast<std::uint64_t>(value);
      break;
    case SweepAxis::Dt:
      c.dt = value;
      break;
  }
  c.master_seed = derive_seed(base.master_seed, to_string(axis), index);
  return c;
}

SweepResult sweep(const SimConfig& base, SweepAxis axis, const std::vector<double>& values,
                  unsigned threads) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  SweepResult result{axis, base, {}};
  // Validate every point before spending time on any of them.
  for (std::size_t i = 0; i < values.size(); ++i) {
    sweep_point_config(base, axis, values[i], i).validate();
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const SimConfig c = sweep_point_config(base, axis, values[i], i);
    CampaignResult r = run_campaign(c, threads);
    for (auto& s : r.series) s.label = point_label(axis, values[i]);
    result.points.push_back({i, values[i], c.master_seed, std::move(r)});
  }
  return result;
}

std::size_t sweep_reference(const SweepResult& result) {
  if (result.axis == SweepAxis::Mu) {
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      if (result.points[i].value == 0.0) return i;
    }
  }
  return 0;
}

ComparisonTable compare_series(const std::vector<ObservableSeries>& series,
                               std::size_t reference) {
  if (series.empty()) throw ConfigError("nothing to compare");
  if (reference >= series.size()) throw ConfigError("reference index out of range");
  ComparisonTable table;
  table.reference = reference;
  for (const auto& row : series.front().rows) table.times.push_back(row.t);
  for (const auto& s : series) {
    if (s.rows.size() != table.times.size()) throw ConfigError("series time grids differ in length");
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      if (std::abs(s.rows[i].t - table.times[i]) > 1e-12 * std::max(1.0, std::abs(table.times[i]))) {
        throw ConfigError("series time grids differ at row " + std::to_string(i));
      }
    }
  }
  for (const auto& s : series) {
    table.labels.push_back(s.label);
    std::vector<double> means;
    std::vector<std::optional<double>> vars;
    std::vector<std::optional<double>> errs;
    std::vector<std::optional<double>> ratios;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      means.push_back(s.rows[i].mean);
      vars.push_back(s.rows[i].variance);
      errs.push_back(s.rows[i].standard_error);
      const auto& ref = series[reference].rows[i].variance;
      if (ref && s.rows[i].variance) {
        ratios.emplace_back(*ref / *s.rows[i].variance);
      } else {
        ratios.emplace_back();
      }
    }
    table.means.push_back(std::move(means));
    table.variances.push_back(std::move(vars));
    table.standard_errors.push_back(std::move(errs));
    table.variance_ratios.push_back(std::move(ratios));
  }
  return table;
}

std::string series_to_csv(const ObservableSeries& series) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : series.rows) {
    out += fmt(r.t) + ',' + fmt(r.mean) + ',' + fmt(r.variance) + ',' + fmt(r.standard_error) +
           ',' + fmt(r.imag_residual) + ',' + fmt(r.discard_fraction) + ',' +
           fmt(r.theta_spread) + ',' + fmt(r.oracle) + '\n';
  }
  return out;
}

ObservableSeries series_from_csv(const std::string& text, const std::string& label) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("CSV '" + label + "' does not start with the series header");
  }
  ObservableSeries s{label, ObservableKind::YQuadrature, {}};
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) {
      throw ConfigError("CSV '" + label + "' line " + std::to_string(line_no) +
                        ": expected 8 fields");
    }
    SeriesRow r;
    auto required = [&](const std::string& field) {
      auto v = parse_field(field);
      if (!v) throw ConfigError("CSV '" + label + "' line " + std::to_string(line_no) + ": missing value");
      return *v;
    };
    r.t = required(f[0]);
    r.mean = required(f[1]);
    r.variance = parse_field(f[2]);
    r.standard_error = parse_field(f[3]);
    r.imag_residual = required(f[4]);
    r.discard_fraction = required(f[5]);
    r.theta_spread = parse_field(f[6]);
    r.oracle = parse_field(f[7]);
    s.rows.push_back(r);
  }
  return s;
}

ObservableSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return series_from_csv(ss.str(), path.stem().string());
}

std::string comparison_to_csv(const ComparisonTable& table) {
  std::string out = "t";
  for (const auto& l : table.labels) {
    out += ",mean[" + l + "],variance[" + l + "],stderr[" + l + "],var_ratio[" +
           table.labels[table.reference] + "/" + l + "]";
  }
  out += '\n';
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    out += fmt(table.times[i]);
    for (std::size_t s = 0; s < table.labels.size(); ++s) {
      out += ',' + fmt(table.means[s][i]) + ',' + fmt(table.variances[s][i]) + ',' +
             fmt(table.standard_errors[s][i]) + ',' + fmt(table.variance_ratios[s][i]);
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename onto '" + path.string() + "': " + ec.message());
}

std::string series_file_stem(const std::string& prefix, ObservableKind kind) {
  return prefix + "_" + std::string(to_string(kind));
}

nlohmann::json campaign_manifest(const CampaignResult& result, double wall_time_seconds) {
  nlohmann::json seeds = nlohmann::json::array();
  seeds.push_back({{"label", "run"},
                   {"seed", result.config.master_seed},
                   {"rule", kTrajectoryNoiseRule}});
  return {{"config", config_to_json(result.config)},
          {"version", kVersion},
          {"seed_derivations", seeds},
          {"wall_time_seconds", wall_time_seconds}};
}

nlohmann::json sweep_manifest(const SweepResult& result, double wall_time_seconds) {
  nlohmann::json seeds = nlohmann::json::array();
  nlohmann::json values = nlohmann::json::array();
  for (const auto& p : result.points) {
    values.push_back(p.value);
    seeds.push_back({{"label", point_label(result.axis, p.value)},
                     {"axis", std::string(to_string(result.axis))},
                     {"index", p.index},
                     {"value", p.value},
                     {"seed", p.seed},
                     {"rule", kSweepSeedRule}});
  }
  return {{"config", config_to_json(result.base)},
          {"version", kVersion},
          {"seed_derivations", seeds},
          {"wall_time_seconds", wall_time_seconds},
          {"sweep", {{"axis", std::string(to_string(result.axis))}, {"values", values}}}};
}

OutputFiles emit_outputs(const CampaignResult& result, const std::filesystem::path& dir,
                         double wall_time_seconds) {
  OutputFiles files;
  for (const auto& s : result.series) {
    const auto path = dir / (series_file_stem("run", s.kind) + ".csv");
    write_file_atomic(path, series_to_csv(s));
    files.csv.push_back(path);
  }
  files.manifest = dir / "manifest.json";
  write_file_atomic(files.manifest, campaign_manifest(result, wall_time_seconds).dump(2) + "\n");
  files.report = dir / "report.json";
  write_file_atomic(files.report, report_json(result.series).dump(2) + "\n");
  return files;
}

OutputFiles emit_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir,
                               double wall_time_seconds) {
  OutputFiles files;
  const std::string axis(to_string(result.axis));
  std::vector<ObservableSeries> all;
  for (const auto& p : result.points) {
    for (const auto& s : p.result.series) {
      const auto path =
          dir / (series_file_stem("sweep_" + axis + "_" + std::to_string(p.index), s.kind) + ".csv");
      const std::string csv = series_to_csv(s);
      write_file_atomic(path, csv);
      files.csv.push_back(path);
      all.push_back(s);
    }
  }
  for (auto kind : result.base.observables) {
    // Built from the CSV text so the table matches a later re-read exactly.
    std::vector<ObservableSeries> per_kind;
    for (const auto& p : result.points) {
      for (const auto& s : p.result.series) {
        if (s.kind == kind) {
          auto reread = series_from_csv(series_to_csv(s), s.label);
          reread.kind = kind;
          per_kind.push_back(std::move(reread));
        }
      }
    }
    const auto table = compare_series(per_kind, sweep_reference(result));
    const auto path = dir / ("sweep_" + axis + "_" + std::string(to_string(kind)) + "_comparison.csv");
    write_file_atomic(path, comparison_to_csv(table));
    files.csv.push_back(path);
  }
  files.manifest = dir / "manifest.json";
  write_file_atomic(files.manifest, sweep_manifest(result, wall_time_seconds).dump(2) + "\n");
  files.report = dir / "report.json";
  write_file_atomic(files.report, report_json(all).dump(2) + "\n");
  return files;
}

}  // namespace kerrgauge
