#include "kerrgauge/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "kerrgauge/errors.hpp"
#include "kerrgauge/random.hpp"

namespace kerrgauge {
namespace {

constexpr std::uint64_t kBlockSize = 256;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Branch of tan containing theta: (-pi/2, pi/2) is branch 0.
double tan_branch(double theta) { return std::floor(theta / std::numbers::pi + 0.5); }

TrajectoryRecord make_record(std::size_t n_points, std::size_t n_obs) {
  TrajectoryRecord rec;
  rec.points.resize(n_points);
  for (auto& p : rec.points) {
    p.values.assign(n_obs, kNaN);
    p.imag_residuals.assign(n_obs, kNaN);
  }
  return rec;
}

void write_point(RecordPoint& point, const std::vector<ObservableKind>& observables,
                 const Amplitudes* amps, double theta_tilde) {
  point.theta_tilde = theta_tilde;
  point.guarded = amps == nullptr;
  for (std::size_t o = 0; o < observables.size(); ++o) {
    if (amps) {
      const auto e = estimate(*amps, observables[o]);
      point.values[o] = e.value;
      point.imag_residuals[o] = e.imag_residual;
    } else {
      point.values[o] = kNaN;
      point.imag_residuals[o] = kNaN;
    }
  }
}

/// Integrates one trajectory, filling `rec` at the record steps. `noise(dt)`
/// returns the (dW, dWbar) pair of the next step.
template <class Noise>
void simulate(const RunSpec& spec, const std::vector<std::uint64_t>& record_steps, Noise&& noise,
              TrajectoryRecord& rec) {
  const double dt = spec.integrator.dt;
  const double guard = spec.ensemble.guard_cos_threshold;
  TrajectoryState state = initial_state(spec.alpha0);
  auto amps = try_map_amplitudes(state, guard);

  std::size_t r = 0;
  for (std::uint64_t j = 0; r < record_steps.size(); ++j) {
    while (r < record_steps.size() && record_steps[r] == j) {
      write_point(rec.points[r], spec.observables, amps ? &*amps : nullptr, state.theta_tilde);
      ++r;
    }
    if (r == record_steps.size()) break;
    if (!amps) {
      for (; r < record_steps.size(); ++r) {
        write_point(rec.points[r], spec.observables, nullptr, state.theta_tilde);
      }
      break;
    }
    const auto [dw, dw_bar] = noise(dt);
    const double theta_before = state.theta_tilde;
    state = advance(state, *amps, spec.gauge(*amps), dt, dw, dw_bar);
    amps = crosses_pole(theta_before, state.theta_tilde) ? std::nullopt
                                                         : try_map_amplitudes(state, guard);
  }
}

/// Wiener increments of trajectory k, optionally aggregated from a finer grid.
struct StreamNoise {
  NoiseStream stream;
  unsigned refinement;

  std::pair<double, double> operator()(double dt) {
    if (refinement == 1) return gaussian_increments(stream, dt);
    const double sub = dt / refinement;
    double dw = 0.0;
    double dw_bar = 0.0;
    for (unsigned s = 0; s < refinement; ++s) {
      const auto [a, b] = gaussian_increments(stream, sub);
      dw += a;
      dw_bar += b;
    }
    return {dw, dw_bar};
  }
};

StreamNoise stream_for(const RunSpec& spec, std::uint64_t k) {
  return {NoiseStream(spec.ensemble.master_seed, k), spec.noise_refinement};
}

class BlockAccumulator {
 public:
  BlockAccumulator(std::size_t n_points, std::size_t n_obs, DiscardPolicy policy)
      : policy_(policy), points_(n_points) {
    for (auto& p : points_) {
      p.values.resize(n_obs);
      p.imag_residuals.resize(n_obs);
    }
  }

  void commit(const TrajectoryRecord& rec) {
    const bool drop_all =
        policy_ == DiscardPolicy::DropAndRenormalize &&
        std::any_of(rec.points.begin(), rec.points.end(), [](const auto& p) { return p.guarded; });
    for (std::size_t i = 0; i < points_.size(); ++i) {
      auto& acc = points_[i];
      const auto& point = rec.points[i];
      ++acc.total;
      if (drop_all || point.guarded) {
        ++acc.discarded;
        continue;
      }
      for (std::size_t o = 0; o < acc.values.size(); ++o) {
        acc.values[o].add(point.values[o]);
        acc.imag_residuals[o].add(point.imag_residuals[o]);
      }
      acc.theta_tilde.add(point.theta_tilde);
    }
  }

  void merge(const BlockAccumulator& other) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      auto& a = points_[i];
      const auto& b = other.points_[i];
      for (std::size_t o = 0; o < a.values.size(); ++o) {
        a.values[o].merge(b.values[o]);
        a.imag_residuals[o].merge(b.imag_residuals[o]);
      }
      a.theta_tilde.merge(b.theta_tilde);
      a.discarded += b.discarded;
      a.total += b.total;
    }
  }

  std::vector<PointStatistics> release() { return std::move(points_); }

 private:
  DiscardPolicy policy_;
  std::vector<PointStatistics> points_;
};

/// Runs `produce(k, record)` for every trajectory on a pool of workers, in
/// fixed-size blocks, and merges block results in block order.
template <class Produce>
EnsembleStatistics reduce_blocks(const RunSpec& spec, Produce&& produce) {
  const auto n_traj = spec.ensemble.n_traj;
  const auto n_points = spec.integrator.record_times.size();
  const auto n_obs = spec.observables.size();
  const std::uint64_t n_blocks = (n_traj + kBlockSize - 1) / kBlockSize;

  std::vector<BlockAccumulator> blocks;
  blocks.reserve(n_blocks);
  for (std::uint64_t b = 0; b < n_blocks; ++b) {
    blocks.emplace_back(n_points, n_obs, spec.ensemble.discard_policy);
  }

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    TrajectoryRecord scratch = make_record(n_points, n_obs);
    for (std::uint64_t b = next++; b < n_blocks; b = next++) {
      const std::uint64_t end = std::min(n_traj, (b + 1) * kBlockSize);
      for (std::uint64_t k = b * kBlockSize; k < end; ++k) {
        produce(k, scratch);
        blocks[b].commit(scratch);
      }
    }
  };
  const unsigned n_threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(spec.ensemble.threads, 1, std::max<std::uint64_t>(n_blocks, 1)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  BlockAccumulator total(n_points, n_obs, spec.ensemble.discard_policy);
  for (const auto& b : blocks) total.merge(b);
  return {spec.observables, spec.integrator.record_times, total.release()};
}

template <class MakeNoise>
std::vector<TrajectoryRecord> collect_records(const RunSpec& spec, MakeNoise&& make_noise) {
  spec.validate();
  const auto steps = spec.integrator.record_steps();
  std::vector<TrajectoryRecord> records(spec.ensemble.n_traj);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t k = next++; k < records.size(); k = next++) {
      records[k] = make_record(steps.size(), spec.observables.size());
      simulate(spec, steps, make_noise(k), records[k]);
    }
  };
  const unsigned n_threads = std::max(1u, spec.ensemble.threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  return records;
}

}  // namespace

bool crosses_pole(double theta_before, double theta_after) {
  return tan_branch(theta_before) != tan_branch(theta_after);
}

IntegratorConfig IntegratorConfig::uniform(double dt, double t_max, std::size_t n_record) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.record_times.reserve(n_record);
  for (std::size_t j = 1; j <= n_record; ++j) {
    cfg.record_times.push_back(t_max * static_cast<double>(j) / static_cast<double>(n_record));
  }
  return cfg;
}

std::vector<std::uint64_t> IntegratorConfig::record_steps() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be non-negative");
  std::vector<std::uint64_t> steps;
  steps.reserve(record_times.size());
  for (double t : record_times) {
    if (!(t >= 0.0) || t > t_max * (1.0 + 1e-12) + 1e-12) {
      throw ConfigError("record time " + std::to_string(t) + " outside [0, t_max]");
    }
    const double k = std::round(t / dt);
    if (std::abs(t - k * dt) > 1e-12 * std::max(1.0, t)) {
      throw ConfigError("record time " + std::to_string(t) + " is not a multiple of dt");
    }
    const auto step = static_cast<std::uint64_t>(k);
    if (!steps.empty() && step <= steps.back()) {
      throw ConfigError("record times must be strictly increasing");
    }
    steps.push_back(step);
  }
  return steps;
}

void RunSpec::validate() const {
  if (alpha0 == cplx{}) throw ConfigError("alpha0 must be nonzero");
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag())) {
    throw ConfigError("alpha0 must be finite");
  }
  if (ensemble.n_traj == 0) throw ConfigError("n_traj must be positive");
  if (!(ensemble.guard_cos_threshold >= 0.0 && ensemble.guard_cos_threshold < 1.0)) {
    throw ConfigError("guard_cos_threshold must lie in [0, 1)");
  }
  if (noise_refinement == 0) throw ConfigError("noise_refinement must be positive");
  if (observables.empty()) throw ConfigError("at least one observable is required");
  (void)integrator.record_steps();
}

TrajectoryState initial_state(cplx alpha0) {
  const cplx phi = invert_amplitude(alpha0);
  return {phi, phi, 0.0};
}

TrajectoryState advance(const TrajectoryState& state, const Amplitudes& amps, GaugePair gauge,
                        double dt, double dw, double dw_bar) {
  constexpr double kSqrt2 = std::numbers::sqrt2;
  const DriftIncrement a = drift(amps, gauge);
  return {state.phi + a.d_phi * dt + kSqrt2 * dw, state.psi + a.d_psi * dt + kSqrt2 * dw_bar,
          state.theta_tilde + a.d_theta_tilde * dt +
              kSqrt2 * (gauge.g * dw + gauge.g_bar * dw_bar)};
}

TrajectoryState step(const TrajectoryState& state, const GaugeSpec& gauge, double dt, double dw,
                     double dw_bar, double guard_cos) {
  const Amplitudes amps = map_amplitudes(state, guard_cos);
  TrajectoryState next = advance(state, amps, gauge(amps), dt, dw, dw_bar);
  if (crosses_pole(state.theta_tilde, next.theta_tilde)) {
    throw GuardTripped("step carried theta~ across a pole of tan(theta~)");
  }
  (void)map_amplitudes(next, guard_cos);
  return next;
}

std::vector<TrajectoryRecord> run_ensemble(const RunSpec& spec) {
  return collect_records(spec, [&](std::uint64_t k) { return stream_for(spec, k); });
}

std::vector<TrajectoryRecord> run_ensemble_noiseless(const RunSpec& spec) {
  return collect_records(spec, [](std::uint64_t) {
    return [](double) { return std::pair<double, double>{0.0, 0.0}; };
  });
}

EnsembleStatistics run_statistics(const RunSpec& spec) {
  spec.validate();
  const auto steps = spec.integrator.record_steps();
  return reduce_blocks(spec, [&](std::uint64_t k, TrajectoryRecord& rec) {
    simulate(spec, steps, stream_for(spec, k), rec);
  });
}

EnsembleStatistics run_coupled_difference(const RunSpec& coarse, const RunSpec& fine) {
  coarse.validate();
  fine.validate();
  const double coarse_sub = coarse.integrator.dt / coarse.noise_refinement;
  const double fine_sub = fine.integrator.dt / fine.noise_refinement;
  if (std::abs(coarse_sub - fine_sub) > 1e-15 * fine_sub) {
    throw ConfigError("coupled runs must share the Brownian sub-step");
  }
  if (coarse.ensemble.master_seed != fine.ensemble.master_seed ||
      coarse.ensemble.n_traj != fine.ensemble.n_traj || coarse.observables != fine.observables ||
      coarse.alpha0 != fine.alpha0) {
    throw ConfigError("coupled runs must share seed, n_traj, alpha0 and observables");
  }
  const auto coarse_steps = coarse.integrator.record_steps();
  const auto fine_steps = fine.integrator.record_steps();
  if (coarse_steps.size() != fine_steps.size()) {
    throw ConfigError("coupled runs must share record times");
  }
  for (std::size_t i = 0; i < coarse_steps.size(); ++i) {
    if (std::abs(coarse.integrator.record_times[i] - fine.integrator.record_times[i]) >
        1e-12 * std::max(1.0, fine.integrator.record_times[i])) {
      throw ConfigError("coupled runs must share record times");
    }
  }

  const auto n_points = coarse_steps.size();
  const auto n_obs = coarse.observables.size();
  return reduce_blocks(coarse, [&](std::uint64_t k, TrajectoryRecord& rec) {
    thread_local TrajectoryRecord fine_rec;
    if (fine_rec.points.size() != n_points ||
        (n_points > 0 && fine_rec.points[0].values.size() != n_obs)) {
      fine_rec = make_record(n_points, n_obs);
    }
    simulate(coarse, coarse_steps, stream_for(coarse, k), rec);
    simulate(fine, fine_steps, stream_for(fine, k), fine_rec);
    for (std::size_t i = 0; i < n_points; ++i) {
      auto& p = rec.points[i];
      const auto& q = fine_rec.points[i];
      p.guarded = p.guarded || q.guarded;
      for (std::size_t o = 0; o < n_obs; ++o) {
        p.values[o] -= q.values[o];
        p.imag_residuals[o] -= q.imag_residuals[o];
      }
      p.theta_tilde -= q.theta_tilde;
    }
  });
}

}  // namespace kerrgauge
