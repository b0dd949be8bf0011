#include "kerrgauge/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "kerrgauge/oracle.hpp"
#include "kerrgauge/phase_core.hpp"

namespace kerrgauge {
namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

double relative_error(cplx value, cplx reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

}  // namespace

CheckOutcome check_oracle_agreement() {
  const cplx alpha0{3.0, 0.0};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 8.0 * i / 99.0;
    const auto rho = oracle::fock_evolve(alpha0, t, 40);
    worst = std::max(worst, std::abs(oracle::exact_y(alpha0, t) -
                                     rho.expectation(ObservableKind::YQuadrature).real()));
  }
  return {"oracle cross-agreement", worst < 1e-10, format("max |dY| = %.3e", worst)};
}

CheckOutcome check_estimator_certification() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto amplitude = [&] {
    const double r = 3.0 * std::sqrt(0.0025 + 0.9975 * unit(rng));
    const double arg = 2.0 * std::numbers::pi * unit(rng);
    return std::polar(r, arg);
  };
  double worst_ratio = 0.0;
  double worst_trace = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx alpha = amplitude();
    const cplx beta = amplitude();
    const double theta_tilde = -1.3 + 2.6 * unit(rng);
    const TrajectoryState state = state_from_amplitudes(alpha, beta, theta_tilde);
    const Amplitudes amps = map_amplitudes(state);
    const double theta = theta_tilde - (alpha * std::conj(beta)).imag();
    const auto k = oracle::fock_kernel(alpha, beta, theta, 60);

    worst_ratio = std::max(worst_ratio, relative_error(ratio_annihilation(amps), k.ratio_annihilation));
    worst_ratio = std::max(worst_ratio, relative_error(ratio_creation(amps), k.ratio_creation));
    for (auto kind : kAllObservables) {
      worst_ratio = std::max(worst_ratio, relative_error(trace_ratio(amps, kind), k.ratio(kind)));
    }
    const double trace = kernel_trace(state).trace();
    worst_trace = std::max(worst_trace, relative_error(trace, cplx(static_cast<double>(k.trace.real()),
                                                                    static_cast<double>(k.trace.imag()))));
  }
  return {"estimator certification", worst_ratio < 1e-10 && worst_trace < 1e-10,
          format("max rel. error: ratios %.3e, traces %.3e", worst_ratio, worst_trace)};
}

CheckOutcome check_number_identity() {
  const cplx alpha{3.0, 0.0};
  const cplx beta{3.0, 0.0};
  const int cutoff = oracle::recommended_cutoff(3.0);
  const double r1 = oracle::number_identity_residual(alpha, beta, 0.0, cutoff, 2e-4);
  const double r2 = oracle::number_identity_residual(alpha, beta, 0.0, cutoff, 1e-4);
  const double r3 = oracle::number_identity_residual(alpha, beta, 0.0, cutoff, 5e-5);
  // Least-squares slope of log r against log h over three equally spaced points.
  const double order = (std::log(r1) - std::log(r3)) / (std::log(2e-4) - std::log(5e-5));
  return {"number-operator identity", r2 < 1e-6 && std::abs(order - 2.0) <= 0.2,
          format("residual(h=1e-4) = %.3e, order = %.3f", r2, order)};
}

std::vector<CheckOutcome> run_selftest() {
  return {check_oracle_agreement(), check_estimator_certification(), check_number_identity()};
}

}  // namespace kerrgauge
