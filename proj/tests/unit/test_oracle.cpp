#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kerrgauge/errors.hpp"
#include "kerrgauge/oracle.hpp"

using namespace kerrgauge;
using namespace kerrgauge::oracle;

TEST_CASE("exact amplitude") {
  CHECK(exact_y(3.0, 0.0) == 0.0);
  CHECK(exact_y({0.0, 3.0}, 0.0) == 3.0);
  CHECK(std::abs(exact_y(3.0, 2.0 * std::numbers::pi)) < 1e-12);
  CHECK(exact_observable(ObservableKind::ModeAmplitude, 3.0, 0.0) == doctest::Approx(3.0));
  // Evaluated with mpmath at 30 digits.
  CHECK(exact_y(3.0, 0.05) == doctest::Approx(-1.3561752522349252424).epsilon(1e-14));
  CHECK(exact_observable(ObservableKind::ModeAmplitude, 3.0, 0.05) ==
        doctest::Approx(2.6382932106771777702).epsilon(1e-14));
  CHECK(exact_observable(ObservableKind::XQuadrature, 3.0, 0.05) ==
        doctest::Approx(2.6382932106771777702).epsilon(1e-14));
  CHECK(exact_observable(ObservableKind::NumberEstimate, {1.0, 2.0}, 3.7) == doctest::Approx(5.0));
  // Revival at t = 2 pi: <a> = alpha0 e^{-i pi} = -alpha0.
  const cplx a = exact_amplitude({0.5, 0.25}, 2.0 * std::numbers::pi);
  CHECK(std::abs(a - cplx(-0.5, -0.25)) < 1e-12);
}

TEST_CASE("cutoff helpers") {
  CHECK(recommended_cutoff(3.0) == 49);
  CHECK(recommended_cutoff(0.0) == 10);
  CHECK(coherent_tail(3.0, 40) < 1e-13);
  CHECK(coherent_tail(3.0, 20) > 1e-6);
  CHECK(coherent_tail(0.0, 0) == 0.0);
  CHECK_NOTHROW(require_cutoff(3.0, 40));
  CHECK_THROWS_AS(require_cutoff(3.0, 20), CutoffError);
}

TEST_CASE("fock density matrix") {
  const auto rho = coherent_density(3.0, 40);
  CHECK(std::abs(static_cast<double>(rho.trace().real()) - 1.0) < 1e-13);
  CHECK(std::abs(static_cast<double>(rho.purity()) - 1.0) < 1e-13);
  CHECK(std::abs(rho.expectation(ObservableKind::ModeAmplitude) - cplx(3.0)) < 1e-12);
  CHECK(std::abs(rho.expectation(ObservableKind::NumberEstimate) - cplx(9.0)) < 1e-11);

  for (double t : {0.1, 1.0, 3.3, 7.9}) {
    const auto ev = fock_evolve(3.0, t, 40);
    CHECK(std::abs(ev.expectation(ObservableKind::YQuadrature).real() - exact_y(3.0, t)) < 1e-10);
    CHECK(std::abs(static_cast<double>(ev.purity()) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(coherent_density(3.0, 15), CutoffError);

  const auto rho0 = coherent_density({1.0, -2.0}, 40);
  CHECK(static_cast<double>((fock_evolve({1.0, -2.0}, 0.0, 40).rho - rho0.rho).norm()) == 0.0);
  const auto later = fock_evolve({1.0, -2.0}, 2.7, 40);
  CHECK(static_cast<double>((later.rho.diagonal() - rho0.rho.diagonal()).norm()) == 0.0);
}

TEST_CASE("number-basis kernel") {
  SUBCASE("coherent projector") {
    // theta = 0, alpha = beta: Lambda = 2 ||alpha><alpha||, Tr = 2 e^{|alpha|^2}.
    const auto k = fock_kernel(1.2, 1.2, 0.0, 40);
    CHECK_FALSE(k.singular);
    CHECK(static_cast<double>(k.trace.real()) == doctest::Approx(2.0 * std::exp(1.44)).epsilon(1e-14));
    CHECK(std::abs(k.ratio_annihilation - cplx(1.2)) < 1e-13);
    CHECK(std::abs(k.ratio(ObservableKind::NumberEstimate) - cplx(1.44)) < 1e-12);
  }
  SUBCASE("alpha = beta = 3") {
    const auto k = fock_kernel(3.0, 3.0, 0.0, 60);
    CHECK(static_cast<double>(k.trace.real()) == doctest::Approx(2.0 * std::exp(9.0)).epsilon(1e-13));
    CHECK(static_cast<double>((k.lambda - k.lambda.adjoint()).norm()) == 0.0);
    CHECK(fock_kernel(3.0, 3.0, std::numbers::pi / 2, 60).singular);
  }
  SUBCASE("kernel is hermitian") {
    const auto lam = kernel_matrix({0.7L, -0.4L}, {-0.2L, 1.1L}, 0.6L, 30);
    CHECK(static_cast<double>((lam - lam.adjoint()).norm()) < 1e-15);
  }
  SUBCASE("closed forms match") {
    const cplx alpha{0.9, 0.3}, beta{-0.4, 1.2};
    const double theta_tilde = 0.7;
    const double theta = theta_tilde - (alpha * std::conj(beta)).imag();
    const auto k = fock_kernel(alpha, beta, theta, 60);
    const auto amps = map_amplitudes(state_from_amplitudes(alpha, beta, theta_tilde));
    for (auto kind : kAllObservables) {
      const cplx closed = trace_ratio(amps, kind);
      CHECK(std::abs(k.ratio(kind) - closed) < 1e-11 * std::max(1.0, std::abs(closed)));
    }
    CHECK(static_cast<double>(k.trace.real()) ==
          doctest::Approx(kernel_trace(state_from_amplitudes(alpha, beta, theta_tilde)).trace()).epsilon(1e-12));
  }
  SUBCASE("vanishing trace is flagged") {
    const auto k = fock_kernel(0.0, 0.0, std::numbers::pi / 2, 10);
    CHECK(k.singular);
  }
  SUBCASE("too small a basis is rejected") {
    CHECK_THROWS_AS(fock_kernel(3.0, 3.0, 0.0, 20), CutoffError);
  }
}

TEST_CASE("number-operator identity converges at second order") {
  const double r1 = number_identity_residual(3.0, 3.0, 0.0, 49, 2e-4);
  const double r2 = number_identity_residual(3.0, 3.0, 0.0, 49, 1e-4);
  CHECK(r2 < 1e-6);
  CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(number_identity_residual(0.0, 0.0, 0.0, 20, 1e-4) < 1e-12);
  CHECK(number_identity_residual({0.5, 0.5}, {-1.0, 0.2}, 0.9, 40, 1e-4) < 1e-6);
}
