#pragma once

// Stochastic gauges and the drift / noise terms of the gauged Ito system
//
//   dphi    = [n (1-i) - 2 G (T + i)] dt + sqrt2 dW
//   dpsi    = [conj(n) (1-i) - 2 Gbar (T - i)] dt + sqrt2 dWbar
//   dtheta~ = -2 T (G^2 + Gbar^2) dt + sqrt2 (G dW + Gbar dWbar)
//
// with T = tan(theta~) and (G, Gbar) real gauge functions of the state. With
// this sign of the G dW term the generator of the system maps the normalized
// kernel Lambda / Tr Lambda onto -i[H, Lambda / Tr Lambda] for any gauge.

#include <functional>
#include <string>
#include <variant>

#include "kerrgauge/phase_core.hpp"

namespace kerrgauge {

struct GaugePair {
  double g = 0.0;
  double g_bar = 0.0;
};

struct PositivePGauge {};

/// G = (mu/2)[n_i - n_r + |alpha|^2], Gbar = (mu/2)[n_i + n_r - |beta|^2].
struct MuGauge {
  double mu = 1.0;
};

/// User-supplied rule. Must be pure and return finite values for non-guarded states.
struct CustomGauge {
  std::string name;
  std::function<GaugePair(const Amplitudes&)> rule;
};

class GaugeSpec {
 public:
  GaugeSpec() = default;

  static GaugeSpec positive_p() { return GaugeSpec(PositivePGauge{}); }
  static GaugeSpec mu(double mu) { return GaugeSpec(MuGauge{mu}); }
  static GaugeSpec custom(std::string name, std::function<GaugePair(const Amplitudes&)> rule) {
    return GaugeSpec(CustomGauge{std::move(name), std::move(rule)});
  }

  /// Parses "positive_p" or "mu:<value>".
  static GaugeSpec parse(const std::string& text);

  /// Inverse of parse for the built-in gauges; custom gauges render as "custom:<name>".
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] bool is_positive_p() const { return std::holds_alternative<PositivePGauge>(kind_); }
  [[nodiscard]] const MuGauge* as_mu() const { return std::get_if<MuGauge>(&kind_); }

  [[nodiscard]] GaugePair operator()(const Amplitudes& amps) const;

 private:
  using Kind = std::variant<PositivePGauge, MuGauge, CustomGauge>;
  explicit GaugeSpec(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_{PositivePGauge{}};
};

struct DriftIncrement {
  cplx d_phi;
  cplx d_psi;
  double d_theta_tilde;
};

/// Coefficients of dW and dWbar. phi_w and psi_wbar are always sqrt(2).
struct NoiseCoefficients {
  cplx phi_w;
  cplx psi_wbar;
  double theta_w;
  double theta_wbar;
};

GaugePair gauge_values(const GaugeSpec& spec, const Amplitudes& amps);
/// Throws GuardTripped for a guarded state.
GaugePair gauge_values(const GaugeSpec& spec, const TrajectoryState& state,
                       double guard_cos = kDefaultGuardCos);

DriftIncrement drift(const Amplitudes& amps, GaugePair gauge);
/// Throws GuardTripped for a guarded state.
DriftIncrement drift(const TrajectoryState& state, GaugePair gauge,
                     double guard_cos = kDefaultGuardCos);

NoiseCoefficients noise_coefficients(GaugePair gauge);

}  // namespace kerrgauge
