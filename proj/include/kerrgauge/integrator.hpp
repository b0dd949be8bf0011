#pragma once

// Fixed-step Ito integration of trajectory ensembles.

#include <complex>
#include <cstdint>
#include <vector>

#include "kerrgauge/gauge.hpp"
#include "kerrgauge/phase_core.hpp"
#include "kerrgauge/statistics.hpp"

namespace kerrgauge {

enum class Scheme { EulerMaruyama };

/// What happens to a trajectory once it trips the singularity guard.
///
/// FreezeAndFlag: it is excluded from every record time at or after the trip.
/// DropAndRenormalize: it is excluded from every record time, including the
/// ones it reached before the trip.
enum class DiscardPolicy { FreezeAndFlag, DropAndRenormalize };

struct IntegratorConfig {
  double dt = 1e-3;
  double t_max = 1.0;
  std::vector<double> record_times;
  Scheme scheme = Scheme::EulerMaruyama;

  /// n_record points at t_max * j / n_record, j = 1..n_record.
  static IntegratorConfig uniform(double dt, double t_max, std::size_t n_record);

  /// Step index of each record time. Throws ConfigError when dt <= 0, when a
  /// record time is not a multiple of dt to 1e-12, when record times are not
  /// increasing, or when one exceeds t_max.
  [[nodiscard]] std::vector<std::uint64_t> record_steps() const;
};

struct EnsembleConfig {
  std::uint64_t n_traj = 1;
  std::uint64_t master_seed = 0;
  double guard_cos_threshold = kDefaultGuardCos;
  DiscardPolicy discard_policy = DiscardPolicy::FreezeAndFlag;
  /// Worker threads. Never changes results.
  unsigned threads = 1;
};

struct RunSpec {
  cplx alpha0{3.0, 0.0};
  GaugeSpec gauge = GaugeSpec::positive_p();
  IntegratorConfig integrator;
  EnsembleConfig ensemble;
  std::vector<ObservableKind> observables{ObservableKind::YQuadrature};
  /// Each step's Wiener increments are sums of this many sub-increments of
  /// size dt / noise_refinement drawn from the trajectory's stream. Runs with
  /// the same seed and the same dt / noise_refinement share Brownian paths.
  unsigned noise_refinement = 1;

  void validate() const;
};

struct RecordPoint {
  /// One entry per RunSpec::observables; NaN once guarded.
  std::vector<double> values;
  std::vector<double> imag_residuals;
  bool guarded = false;
  double theta_tilde = 0.0;
};

struct TrajectoryRecord {
  std::vector<RecordPoint> points;
};

/// Ensemble statistics at one record time.
struct PointStatistics {
  std::vector<RunningMoments> values;  ///< per observable
  std::vector<RunningMoments> imag_residuals;
  RunningMoments theta_tilde;
  std::uint64_t discarded = 0;
  std::uint64_t total = 0;

  [[nodiscard]] double discard_fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(discarded) / static_cast<double>(total);
  }
};

struct EnsembleStatistics {
  std::vector<ObservableKind> observables;
  std::vector<double> times;
  std::vector<PointStatistics> points;
};

/// Phase-space point of the delta-function P at the coherent state alpha0.
TrajectoryState initial_state(cplx alpha0);

/// True when theta~ moved across a pole of tan(theta~) = pi/2 + k pi. The
/// gauged dynamics cannot cross a pole (the restoring drift -2T(G^2 + Gbar^2)
/// diverges there), so a discrete step that does is treated as guarded.
bool crosses_pole(double theta_before, double theta_after);

/// One Euler-Maruyama step; gauge and drift are evaluated at the pre-step
/// state. Throws GuardTripped when the pre- or post-step state is guarded or
/// the step crosses a pole.
TrajectoryState step(const TrajectoryState& state, const GaugeSpec& gauge, double dt, double dw,
                     double dw_bar, double guard_cos = kDefaultGuardCos);

/// Step from already-mapped amplitudes and gauge values. No guard checks.
TrajectoryState advance(const TrajectoryState& state, const Amplitudes& amps, GaugePair gauge,
                        double dt, double dw, double dw_bar);

/// One record per trajectory. Memory grows as n_traj * record points; use
/// run_statistics for large ensembles.
std::vector<TrajectoryRecord> run_ensemble(const RunSpec& spec);

/// Same as run_ensemble but every Wiener increment is zero.
std::vector<TrajectoryRecord> run_ensemble_noiseless(const RunSpec& spec);

/// Streaming per-record-time statistics. Trajectories are reduced in fixed
/// blocks merged in block order, so the result is independent of `threads`.
EnsembleStatistics run_statistics(const RunSpec& spec);

/// Statistics of the per-trajectory difference coarse - fine, where both runs
/// are driven by the same Brownian paths. Requires equal seeds, record times
/// and observables, and coarse.dt / coarse.noise_refinement equal to
/// fine.dt / fine.noise_refinement.
EnsembleStatistics run_coupled_difference(const RunSpec& coarse, const RunSpec& fine);

}  // namespace kerrgauge
