#pragma once

// Campaigns: ensemble runs reduced to per-time observable series, parameter
// sweeps, comparison tables and their CSV / JSON outputs.

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "kerrgauge/sim_config.hpp"

namespace kerrgauge {

struct SeriesRow {
  double t = 0.0;
  double mean = 0.0;
  std::optional<double> variance;  ///< sample variance of per-trajectory estimates
  std::optional<double> standard_error;
  double imag_residual = 0.0;
  double discard_fraction = 0.0;
  std::optional<double> theta_spread;  ///< sample std of theta~
  std::optional<double> oracle;
};

struct ObservableSeries {
  std::string label;
  ObservableKind kind = ObservableKind::YQuadrature;
  std::vector<SeriesRow> rows;
};

/// Record time whose mean sits more than `threshold` standard errors from the
/// oracle: a systematic-error suspect.
struct BiasFlag {
  double t;
  double deviation;  ///< |mean - oracle| / stderr
};

struct CampaignResult {
  SimConfig config;
  std::vector<ObservableSeries> series;  ///< one per configured observable
};

/// Runs the ensemble and reduces it to one series per observable.
CampaignResult run_campaign(const SimConfig& config, unsigned threads = 1);

/// Turns ensemble statistics into series; attaches oracle values when
/// `with_oracle` is set.
std::vector<ObservableSeries> to_series(const EnsembleStatistics& stats, cplx alpha0,
                                        bool with_oracle, const std::string& label);

inline constexpr double kBiasFlagSigmas = 5.0;

std::vector<BiasFlag> flag_systematic_error(const ObservableSeries& series,
                                            double threshold = kBiasFlagSigmas);

enum class SweepAxis { Mu, NTraj, Dt };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepPoint {
  std::size_t index = 0;
  double value = 0.0;
  std::uint64_t seed = 0;
  CampaignResult result;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Mu;
  SimConfig base;
  std::vector<SweepPoint> points;
};

/// Applies `value` on `axis` to `base`.
SimConfig sweep_point_config(const SimConfig& base, SweepAxis axis, double value,
                             std::size_t index);

/// One campaign per value. Point i runs with
/// master_seed = derive_seed(base.master_seed, to_string(axis), i).
SweepResult sweep(const SimConfig& base, SweepAxis axis, const std::vector<double>& values,
                  unsigned threads = 1);

/// Side-by-side table of several series on one time grid, with the variance
/// ratio Var(reference) / Var(series) per time.
struct ComparisonTable {
  std::vector<std::string> labels;
  std::size_t reference = 0;
  std::vector<double> times;
  /// [series][time]
  std::vector<std::vector<double>> means;
  std::vector<std::vector<std::optional<double>>> variances;
  std::vector<std::vector<std::optional<double>>> standard_errors;
  std::vector<std::vector<std::optional<double>>> variance_ratios;
};

/// Throws ConfigError when the series do not share a time grid.
ComparisonTable compare_series(const std::vector<ObservableSeries>& series, std::size_t reference);

/// Index of the mu = 0 point of a mu sweep, else 0.
std::size_t sweep_reference(const SweepResult& result);

/// CSV columns: t, mean, variance, stderr, imag_residual, discard_fraction,
/// theta_spread, oracle. Reals use 17 significant digits; absent values are
/// empty fields.
std::string series_to_csv(const ObservableSeries& series);
ObservableSeries series_from_csv(const std::string& text, const std::string& label);
ObservableSeries read_series_csv(const std::filesystem::path& path);

std::string comparison_to_csv(const ComparisonTable& table);

/// Writes via a temporary file and rename. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// File stem used for the CSV of a series: "<prefix>_<observable>".
std::string series_file_stem(const std::string& prefix, ObservableKind kind);

struct OutputFiles {
  std::vector<std::filesystem::path> csv;
  std::filesystem::path manifest;
  std::filesystem::path report;
};

/// Writes run_<observable>.csv, manifest.json and report.json under `dir`.
OutputFiles emit_outputs(const CampaignResult& result, const std::filesystem::path& dir,
                         double wall_time_seconds);

/// Writes sweep_<axis>_<i>_<observable>.csv per point,
/// sweep_<axis>_<observable>_comparison.csv, manifest.json and report.json.
OutputFiles emit_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir,
                               double wall_time_seconds);

/// Manifest keys: config, version, seed_derivations, wall_time_seconds, and
/// for sweeps also sweep = {axis, values}.
nlohmann::json campaign_manifest(const CampaignResult& result, double wall_time_seconds);
nlohmann::json sweep_manifest(const SweepResult& result, double wall_time_seconds);

}  // namespace kerrgauge
