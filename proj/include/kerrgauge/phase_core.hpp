#pragma once

// Phase-space state of one hermitian-P trajectory and the per-trajectory
// observable estimators.
//
// A trajectory is carried in the log-amplitude variables (phi, psi) with
//   alpha = exp[(1-i)/2 * phi],  beta = exp[(1-i)/2 * psi],
// and the shifted phase theta~ = theta + Im(n), n = alpha * conj(beta).
// The kernel is Lambda = e^{i theta} ||alpha><beta|| + h.c., with trace
// 2 e^{Re n} cos(theta~).

#include <array>
#include <complex>
#include <optional>
#include <string_view>

namespace kerrgauge {

using cplx = std::complex<double>;

/// Default singularity guard on |cos(theta~)|.
inline constexpr double kDefaultGuardCos = 1e-6;

struct TrajectoryState {
  cplx phi{};
  cplx psi{};
  double theta_tilde = 0.0;
};

/// Quantities derived from a TrajectoryState. `tan_theta` is T = tan(theta~).
struct Amplitudes {
  cplx alpha;
  cplx beta;
  cplx n;
  double tan_theta;
};

/// Tr[Lambda] as sign * exp(log_magnitude). A zero trace has sign 0 and
/// log_magnitude = -inf.
struct KernelWeight {
  double log_magnitude;
  int sign;

  [[nodiscard]] double trace() const;
};

enum class ObservableKind { YQuadrature, XQuadrature, ModeAmplitude, NumberEstimate };

inline constexpr std::array kAllObservables{ObservableKind::YQuadrature,
                                            ObservableKind::XQuadrature,
                                            ObservableKind::ModeAmplitude,
                                            ObservableKind::NumberEstimate};

/// Canonical names: Y_quadrature, X_quadrature, mode_amplitude, number_estimate.
std::string_view to_string(ObservableKind kind);
ObservableKind parse_observable(std::string_view name);

/// Real estimate plus the imaginary part of the complex trace ratio.
///
/// For the hermitian observables the residual vanishes up to rounding. For
/// mode_amplitude the estimator of <a> is genuinely complex: `value` carries
/// Re<a> and `imag_residual` carries Im<a>.
struct Estimate {
  double value;
  double imag_residual;
};

/// Builds the state whose mapped amplitudes are (alpha, beta) at the given
/// theta~. Both amplitudes must be nonzero.
TrajectoryState state_from_amplitudes(cplx alpha, cplx beta, double theta_tilde);

/// Non-throwing mapping. Returns nullopt when |cos(theta~)| <= guard or when
/// any derived quantity is not finite.
std::optional<Amplitudes> try_map_amplitudes(const TrajectoryState& state,
                                             double guard_cos = kDefaultGuardCos) noexcept;

/// Throws GuardTripped where try_map_amplitudes returns nullopt.
Amplitudes map_amplitudes(const TrajectoryState& state, double guard_cos = kDefaultGuardCos);

/// phi = (1+i) Log(alpha), principal branch. Throws DomainError for alpha = 0.
cplx invert_amplitude(cplx alpha);

KernelWeight kernel_trace(const TrajectoryState& state);
KernelWeight kernel_trace(cplx alpha, cplx beta, double theta_tilde);

/// Tr[a Lambda] / Tr[Lambda] = [alpha (1 + iT) + beta (1 - iT)] / 2.
cplx ratio_annihilation(const Amplitudes& amps);
/// Tr[a^dag Lambda] / Tr[Lambda] = [conj(beta) (1 + iT) + conj(alpha) (1 - iT)] / 2.
cplx ratio_creation(const Amplitudes& amps);

/// Complex trace ratio Tr[O Lambda] / Tr[Lambda] for the observable.
cplx trace_ratio(const Amplitudes& amps, ObservableKind kind);

Estimate estimate(const Amplitudes& amps, ObservableKind kind);

/// Real part of the trace ratio. Throws GuardTripped on a guarded state.
double estimate_observable(const TrajectoryState& state, ObservableKind kind,
                           double guard_cos = kDefaultGuardCos);

}  // namespace kerrgauge
