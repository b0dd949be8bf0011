#include "kerrgauge/phase_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kerrgauge/errors.hpp"

namespace kerrgauge {
namespace {

constexpr cplx kHalfOneMinusI{0.5, -0.5};
constexpr cplx kI{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

double KernelWeight::trace() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_magnitude);
}

std::string_view to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::YQuadrature:
      return "Y_quadrature";
    case ObservableKind::XQuadrature:
      return "X_quadrature";
    case ObservableKind::ModeAmplitude:
      return "mode_amplitude";
    case ObservableKind::NumberEstimate:
      return "number_estimate";
  }
  return "unknown";
}

ObservableKind parse_observable(std::string_view name) {
  for (auto kind : kAllObservables) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown observable '" + std::string(name) + "'");
}

TrajectoryState state_from_amplitudes(cplx alpha, cplx beta, double theta_tilde) {
  return {invert_amplitude(alpha), invert_amplitude(beta), theta_tilde};
}

std::optional<Amplitudes> try_map_amplitudes(const TrajectoryState& state,
                                             double guard_cos) noexcept {
  const double c = std::cos(state.theta_tilde);
  if (!(std::abs(c) > guard_cos)) return std::nullopt;

  const cplx log_alpha = kHalfOneMinusI * state.phi;
  const cplx log_beta = kHalfOneMinusI * state.psi;
  Amplitudes amps{std::exp(log_alpha), std::exp(log_beta),
                  std::exp(log_alpha + std::conj(log_beta)), std::sin(state.theta_tilde) / c};
  if (!finite(amps.alpha) || !finite(amps.beta) || !finite(amps.n) ||
      !std::isfinite(amps.tan_theta)) {
    return std::nullopt;
  }
  return amps;
}

Amplitudes map_amplitudes(const TrajectoryState& state, double guard_cos) {
  if (auto amps = try_map_amplitudes(state, guard_cos)) return *amps;
  throw GuardTripped("trajectory state is guarded: |cos(theta~)| = " +
                     std::to_string(std::abs(std::cos(state.theta_tilde))) +
                     " or non-finite amplitudes");
}

cplx invert_amplitude(cplx alpha) {
  if (alpha == cplx{}) throw DomainError("invert_amplitude: alpha = 0 has no logarithm");
  return cplx{1.0, 1.0} * std::log(alpha);
}

KernelWeight kernel_trace(const TrajectoryState& state) {
  const cplx log_n = kHalfOneMinusI * state.phi + std::conj(kHalfOneMinusI * state.psi);
  const double n_r = std::exp(log_n.real()) * std::cos(log_n.imag());
  const double c = std::cos(state.theta_tilde);
  if (c == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
  return {n_r + std::log(2.0) + std::log(std::abs(c)), c > 0 ? 1 : -1};
}

KernelWeight kernel_trace(cplx alpha, cplx beta, double theta_tilde) {
  const double n_r = (alpha * std::conj(beta)).real();
  const double c = std::cos(theta_tilde);
  if (c == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
  return {n_r + std::log(2.0) + std::log(std::abs(c)), c > 0 ? 1 : -1};
}

cplx ratio_annihilation(const Amplitudes& amps) {
  const cplx plus = 1.0 + kI * amps.tan_theta;
  const cplx minus = 1.0 - kI * amps.tan_theta;
  return 0.5 * (amps.alpha * plus + amps.beta * minus);
}

cplx ratio_creation(const Amplitudes& amps) {
  const cplx plus = 1.0 + kI * amps.tan_theta;
  const cplx minus = 1.0 - kI * amps.tan_theta;
  return 0.5 * (std::conj(amps.beta) * plus + std::conj(amps.alpha) * minus);
}

cplx trace_ratio(const Amplitudes& amps, ObservableKind kind) {
  switch (kind) {
    case ObservableKind::YQuadrature:
      return (ratio_annihilation(amps) - ratio_creation(amps)) / (2.0 * kI);
    case ObservableKind::XQuadrature:
      return 0.5 * (ratio_annihilation(amps) + ratio_creation(amps));
    case ObservableKind::ModeAmplitude:
      return ratio_annihilation(amps);
    case ObservableKind::NumberEstimate: {
      // Tr[a^dag a Lambda] / Tr[Lambda]
      const cplx plus = 1.0 + kI * amps.tan_theta;
      const cplx minus = 1.0 - kI * amps.tan_theta;
      return 0.5 * (amps.n * plus + std::conj(amps.n) * minus);
    }
  }
  return {};
}

Estimate estimate(const Amplitudes& amps, ObservableKind kind) {
  const cplx r = trace_ratio(amps, kind);
  return {r.real(), r.imag()};
}

double estimate_observable(const TrajectoryState& state, ObservableKind kind, double guard_cos) {
  return estimate(map_amplitudes(state, guard_cos), kind).value;
}

}  // namespace kerrgauge
