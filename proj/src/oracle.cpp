#include "kerrgauge/oracle.hpp"

#include <cmath>
#include <string>

#include "kerrgauge/errors.hpp"

namespace kerrgauge::oracle {
namespace {

using LVector = Eigen::Matrix<lcplx, Eigen::Dynamic, 1>;

constexpr lcplx kIL{0.0L, 1.0L};

lcplx widen(cplx z) { return {z.real(), z.imag()}; }
cplx narrow(lcplx z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

void require_positive(int cutoff) {
  if (cutoff < 1) throw CutoffError("cutoff must be at least 1");
}

}  // namespace

cplx exact_amplitude(cplx alpha0, double t) {
  const cplx i{0.0, 1.0};
  return alpha0 * std::exp(std::norm(alpha0) * (std::exp(-i * t) - 1.0) - i * (0.5 * t));
}

double exact_y(cplx alpha0, double t) { return exact_amplitude(alpha0, t).imag(); }

double exact_observable(ObservableKind kind, cplx alpha0, double t) {
  switch (kind) {
    case ObservableKind::YQuadrature:
      return exact_y(alpha0, t);
    case ObservableKind::XQuadrature:
    case ObservableKind::ModeAmplitude:
      return exact_amplitude(alpha0, t).real();
    case ObservableKind::NumberEstimate:
      return std::norm(alpha0);
  }
  return 0.0;
}

int recommended_cutoff(double radius) {
  return static_cast<int>(std::ceil(radius * radius + 10.0 * radius + 10.0));
}

double coherent_tail(double radius, int cutoff) {
  if (radius == 0.0) return 0.0;
  const double mean = radius * radius;
  // log of the Poisson weight at n = cutoff + 1, then ratio recursion.
  double n = cutoff + 1.0;
  double log_term = -mean + n * std::log(mean) - std::lgamma(n + 1.0);
  double term = std::exp(log_term);
  double tail = 0.0;
  for (int k = 0; k < 100000; ++k) {
    tail += term;
    n += 1.0;
    term *= mean / n;
    if (n > mean && term < 1e-300 + 1e-18 * tail) break;
  }
  return tail;
}

void require_cutoff(double radius, int cutoff) {
  require_positive(cutoff);
  const double tail = coherent_tail(radius, cutoff);
  if (tail > kMaxTail) {
    throw CutoffError("cutoff " + std::to_string(cutoff) + " drops probability " +
                      std::to_string(tail) + " for amplitude " + std::to_string(radius) +
                      "; need at least " + std::to_string(recommended_cutoff(radius)));
  }
}

FockMatrix annihilation(int cutoff) {
  require_positive(cutoff);
  FockMatrix a = FockMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 0; n < cutoff; ++n) a(n, n + 1) = std::sqrt(static_cast<long double>(n + 1));
  return a;
}

FockMatrix observable_matrix(ObservableKind kind, int cutoff) {
  const FockMatrix a = annihilation(cutoff);
  const FockMatrix ad = a.adjoint();
  switch (kind) {
    case ObservableKind::YQuadrature:
      return (a - ad) / (2.0L * kIL);
    case ObservableKind::XQuadrature:
      return (a + ad) / 2.0L;
    case ObservableKind::ModeAmplitude:
      return a;
    case ObservableKind::NumberEstimate:
      return ad * a;
  }
  return a;
}

LVector coherent_vector(lcplx alpha, int cutoff) {
  require_positive(cutoff);
  LVector v(cutoff + 1);
  v(0) = 1.0L;
  for (int n = 1; n <= cutoff; ++n) {
    v(n) = v(n - 1) * alpha / std::sqrt(static_cast<long double>(n));
  }
  return v;
}

cplx FockDensityMatrix::expectation(ObservableKind kind) const {
  return narrow((observable_matrix(kind, cutoff) * rho).trace());
}

FockDensityMatrix coherent_density(cplx alpha0, int cutoff) {
  require_cutoff(std::abs(alpha0), cutoff);
  const LVector c = coherent_vector(widen(alpha0), cutoff) *
                    std::exp(-0.5L * static_cast<long double>(std::norm(alpha0)));
  return {cutoff, c * c.adjoint()};
}

FockDensityMatrix fock_evolve(cplx alpha0, double t, int cutoff) {
  FockDensityMatrix state = coherent_density(alpha0, cutoff);
  const long double tl = t;
  for (int n = 0; n <= cutoff; ++n) {
    for (int m = 0; m <= cutoff; ++m) {
      const long double phase = -0.5L * static_cast<long double>(n * n - m * m) * tl;
      state.rho(n, m) *= lcplx{std::cos(phase), std::sin(phase)};
    }
  }
  return state;
}

FockMatrix kernel_matrix(lcplx alpha, lcplx beta, long double theta, int cutoff) {
  const LVector va = coherent_vector(alpha, cutoff);
  const LVector vb = coherent_vector(beta, cutoff);
  const lcplx phase{std::cos(theta), std::sin(theta)};
  const FockMatrix half = phase * (va * vb.adjoint());
  return half + FockMatrix(half.adjoint());
}

FockKernel fock_kernel(cplx alpha, cplx beta, double theta, int cutoff) {
  require_cutoff(std::max(std::abs(alpha), std::abs(beta)), cutoff);
  FockKernel k;
  k.lambda = kernel_matrix(widen(alpha), widen(beta), theta, cutoff);
  k.trace = k.lambda.trace();

  long double scale = 0.0L;
  long double term = 1.0L;
  const long double ab = static_cast<long double>(std::abs(alpha)) * std::abs(beta);
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) term *= ab / n;
    scale += term;
  }
  k.singular = std::abs(k.trace) < 1e-12L * 2.0L * scale;

  const FockMatrix a = annihilation(cutoff);
  k.ratio_annihilation = narrow((a * k.lambda).trace() / k.trace);
  k.ratio_creation = narrow((FockMatrix(a.adjoint()) * k.lambda).trace() / k.trace);
  for (std::size_t i = 0; i < kAllObservables.size(); ++i) {
    k.ratios[i] = narrow((observable_matrix(kAllObservables[i], cutoff) * k.lambda).trace() / k.trace);
  }
  return k;
}

double number_identity_residual(cplx alpha, cplx beta, double theta, int cutoff, double h) {
  const lcplx al = widen(alpha);
  const lcplx bl = widen(beta);
  const long double th = theta;
  const long double hl = h;
  require_cutoff(std::max(std::abs(alpha), std::abs(beta)) + h, cutoff);

  const FockMatrix ad = annihilation(cutoff).adjoint();
  const FockMatrix number = ad * annihilation(cutoff);
  const FockMatrix exact = number * kernel_matrix(al, bl, th, cutoff);

  auto wirtinger = [&](auto&& lambda_at) -> FockMatrix {
    const FockMatrix dr = lambda_at(hl) - lambda_at(-hl);
    const FockMatrix di = lambda_at(lcplx{0.0L, hl}) - lambda_at(lcplx{0.0L, -hl});
    return (dr - kIL * di) / (4.0L * hl);
  };
  const FockMatrix d_alpha =
      wirtinger([&](lcplx shift) { return kernel_matrix(al + shift, bl, th, cutoff); });
  const FockMatrix d_beta =
      wirtinger([&](lcplx shift) { return kernel_matrix(al, bl + shift, th, cutoff); });
  const FockMatrix approx = al * d_alpha + bl * d_beta;

  const long double norm = exact.norm();
  const long double diff = (exact - approx).norm();
  return static_cast<double>(norm == 0.0L ? diff : diff / norm);
}

}  // namespace kerrgauge::oracle
