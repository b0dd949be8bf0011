#include "kerrgauge/gauge.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <type_traits>

#include "kerrgauge/errors.hpp"

namespace kerrgauge {
namespace {

constexpr cplx kOneMinusI{1.0, -1.0};
constexpr cplx kI{0.0, 1.0};

}  // namespace

GaugeSpec GaugeSpec::parse(const std::string& text) {
  if (text == "positive_p") return positive_p();
  if (text.rfind("mu:", 0) == 0) {
    const std::string value = text.substr(3);
    char* end = nullptr;
    const double mu = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(mu)) {
      throw ConfigError("bad gauge parameter in '" + text + "'");
    }
    return GaugeSpec::mu(mu);
  }
  throw ConfigError("unknown gauge '" + text + "' (expected positive_p or mu:<value>)");
}

std::string GaugeSpec::describe() const {
  if (is_positive_p()) return "positive_p";
  if (const auto* m = as_mu()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "mu:%.17g", m->mu);
    return buf;
  }
  return "custom:" + std::get<CustomGauge>(kind_).name;
}

GaugePair GaugeSpec::operator()(const Amplitudes& amps) const {
  return std::visit(
      [&](const auto& k) -> GaugePair {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PositivePGauge>) {
          return {};
        } else if constexpr (std::is_same_v<K, MuGauge>) {
          const double n_r = amps.n.real();
          const double n_i = amps.n.imag();
          return {0.5 * k.mu * (n_i - n_r + std::norm(amps.alpha)),
                  0.5 * k.mu * (n_i + n_r - std::norm(amps.beta))};
        } else {
          return k.rule(amps);
        }
      },
      kind_);
}

GaugePair gauge_values(const GaugeSpec& spec, const Amplitudes& amps) { return spec(amps); }

GaugePair gauge_values(const GaugeSpec& spec, const TrajectoryState& state, double guard_cos) {
  return spec(map_amplitudes(state, guard_cos));
}

DriftIncrement drift(const Amplitudes& amps, GaugePair gauge) {
  const double t = amps.tan_theta;
  return {amps.n * kOneMinusI - 2.0 * gauge.g * (t + kI),
          std::conj(amps.n) * kOneMinusI - 2.0 * gauge.g_bar * (t - kI),
          -2.0 * t * (gauge.g * gauge.g + gauge.g_bar * gauge.g_bar)};
}

DriftIncrement drift(const TrajectoryState& state, GaugePair gauge, double guard_cos) {
  return drift(map_amplitudes(state, guard_cos), gauge);
}

NoiseCoefficients noise_coefficients(GaugePair gauge) {
  constexpr double kSqrt2 = std::numbers::sqrt2;
  return {kSqrt2, kSqrt2, kSqrt2 * gauge.g, kSqrt2 * gauge.g_bar};
}

}  // namespace kerrgauge
