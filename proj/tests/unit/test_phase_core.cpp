#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kerrgauge/errors.hpp"
#include "kerrgauge/phase_core.hpp"

using namespace kerrgauge;
using std::numbers::pi;

namespace {

const cplx kOnePlusI{1.0, 1.0};

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

cplx random_amplitude(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(3.0 * std::sqrt(0.001 + 0.999 * u(rng)), 2.0 * pi * u(rng));
}

}  // namespace

TEST_CASE("map_amplitudes at real amplitudes") {
  SUBCASE("alpha = beta = 3") {
    const auto a = map_amplitudes({kOnePlusI * std::log(3.0), kOnePlusI * std::log(3.0), 0.0});
    CHECK(close(a.alpha, 3.0, 1e-14));
    CHECK(close(a.beta, 3.0, 1e-14));
    CHECK(close(a.n, 9.0, 1e-14));
    CHECK(a.tan_theta == 0.0);
  }
  SUBCASE("origin of phi, psi at theta~ = pi/4") {
    const auto a = map_amplitudes({0.0, 0.0, pi / 4});
    CHECK(a.alpha == cplx(1.0));
    CHECK(a.beta == cplx(1.0));
    CHECK(a.n == cplx(1.0));
    CHECK(a.tan_theta == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("alpha = 2, beta = 1") {
    const auto a = map_amplitudes({kOnePlusI * std::log(2.0), 0.0, 0.0});
    CHECK(close(a.alpha, 2.0, 1e-14));
    CHECK(a.beta == cplx(1.0));
    CHECK(close(a.n, 2.0, 1e-14));
  }
}

TEST_CASE("guard trips near the tan singularity and on overflow") {
  const TrajectoryState near_pole{0.0, 0.0, pi / 2};
  CHECK_THROWS_AS(map_amplitudes(near_pole), GuardTripped);
  CHECK_FALSE(try_map_amplitudes(near_pole).has_value());
  // |cos| = sin(1e-3) ~ 1e-3: fine at the default threshold, guarded at 1e-2.
  const TrajectoryState close_to_pole{0.0, 0.0, pi / 2 - 1e-3};
  CHECK(try_map_amplitudes(close_to_pole).has_value());
  CHECK_FALSE(try_map_amplitudes(close_to_pole, 1e-2).has_value());
  // Re[(1-i)/2 * phi] = 1000 overflows exp.
  const TrajectoryState huge{cplx(2000.0, 0.0), 0.0, 0.0};
  CHECK_THROWS_AS(map_amplitudes(huge), GuardTripped);
}

TEST_CASE("invert_amplitude uses the principal logarithm") {
  CHECK(close(invert_amplitude(3.0), kOnePlusI * std::log(3.0), 1e-15));
  CHECK(invert_amplitude(1.0) == cplx(0.0));
  // (1+i)(ln 3 + i pi/2), evaluated with mpmath.
  const cplx phi = invert_amplitude({0.0, 3.0});
  CHECK(phi.real() == doctest::Approx(-0.47218403812678692784).epsilon(1e-14));
  CHECK(phi.imag() == doctest::Approx(2.6694086154630063106).epsilon(1e-14));
  CHECK(close(map_amplitudes({phi, phi, 0.0}).alpha, cplx(0.0, 3.0), 1e-12));
  CHECK_THROWS_AS(invert_amplitude(0.0), DomainError);
}

TEST_CASE("invert then map is the identity on nonzero amplitudes") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> log_radius(-20.0, 20.0);
  std::uniform_real_distribution<double> arg(-pi, pi);
  for (int i = 0; i < 1000; ++i) {
    const cplx alpha = std::polar(std::exp(log_radius(rng)), arg(rng));
    const auto a = map_amplitudes({invert_amplitude(alpha), 0.0, 0.0});
    CHECK(std::abs(a.alpha - alpha) <= 1e-12 * std::abs(alpha));
  }
}

TEST_CASE("kernel_trace") {
  SUBCASE("alpha = beta = 3, theta~ = 0") {
    const auto w = kernel_trace(state_from_amplitudes(3.0, 3.0, 0.0));
    CHECK(w.sign == 1);
    CHECK(w.trace() == doctest::Approx(2.0 * std::exp(9.0)).epsilon(1e-13));
  }
  SUBCASE("zero amplitudes, theta~ = pi/3") {
    const auto w = kernel_trace(0.0, 0.0, pi / 3);
    CHECK(w.trace() == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("sign follows cos(theta~)") {
    const auto w = kernel_trace(state_from_amplitudes(1.0, 1.0, 2.0));
    CHECK(w.sign == -1);
    CHECK(w.trace() == doctest::Approx(2.0 * std::exp(1.0) * std::cos(2.0)).epsilon(1e-14));
  }
  SUBCASE("large n_r stays representable in log form") {
    const auto w = kernel_trace(cplx(40.0), cplx(40.0), 0.0);
    CHECK(w.log_magnitude == doctest::Approx(1600.0 + std::log(2.0)).epsilon(1e-15));
    CHECK(std::isinf(w.trace()));
  }
  SUBCASE("reconstructed trace matches 2 e^{n_r} cos(theta~)") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> th(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
      const cplx a = random_amplitude(rng);
      const cplx b = random_amplitude(rng);
      const double t = th(rng);
      const double direct = 2.0 * std::exp((a * std::conj(b)).real()) * std::cos(t);
      CHECK(kernel_trace(state_from_amplitudes(a, b, t)).trace() ==
            doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimators at the coherent diagonal") {
  const auto amps = map_amplitudes(state_from_amplitudes(3.0, 3.0, 0.0));
  CHECK(estimate(amps, ObservableKind::YQuadrature).value == doctest::Approx(0.0));
  CHECK(estimate(amps, ObservableKind::ModeAmplitude).value == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(estimate(amps, ObservableKind::XQuadrature).value == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(estimate(amps, ObservableKind::NumberEstimate).value == doctest::Approx(9.0).epsilon(1e-14));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const cplx alpha = random_amplitude(rng);
    const auto a = map_amplitudes(state_from_amplitudes(alpha, alpha, 0.0));
    CHECK(close(trace_ratio(a, ObservableKind::ModeAmplitude), alpha, 1e-12));
  }
}

TEST_CASE("Y estimate is invariant under the hermitian swap (alpha, beta, t) -> (beta, alpha, -t)") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> th(-1.4, 1.4);
  for (int i = 0; i < 200; ++i) {
    const cplx a = random_amplitude(rng);
    const cplx b = random_amplitude(rng);
    const double t = th(rng);
    const auto e1 = estimate(map_amplitudes(state_from_amplitudes(a, b, t)), ObservableKind::YQuadrature);
    const auto e2 = estimate(map_amplitudes(state_from_amplitudes(b, a, -t)), ObservableKind::YQuadrature);
    CHECK(e1.value == doctest::Approx(e2.value).epsilon(1e-10).scale(3.0));
    // Hermitian observables have real trace ratios.
    CHECK(std::abs(e1.imag_residual) < 1e-12 * (1.0 + std::abs(e1.value)));
  }
}

TEST_CASE("estimate_observable guards") {
  CHECK_THROWS_AS(estimate_observable({0.0, 0.0, pi / 2}, ObservableKind::YQuadrature), GuardTripped);
  CHECK(estimate_observable({0.0, 0.0, 0.0}, ObservableKind::XQuadrature) == doctest::Approx(1.0));
}

TEST_CASE("observable names round-trip") {
  for (auto k : kAllObservables) CHECK(parse_observable(to_string(k)) == k);
  CHECK(to_string(ObservableKind::YQuadrature) == "Y_quadrature");
}
