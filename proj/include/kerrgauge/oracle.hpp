#pragma once

// Exact references for the Kerr oscillator H = (a^dag a)^2 / 2 (hbar = 1):
// the closed-form coherent-state amplitude and a truncated number-basis
// implementation of the kernel, the observables and the unitary evolution.
//
// Number-basis arithmetic runs in long double so that kernel traces with
// strong cancellation (|exp(alpha conj(beta))| << exp(|alpha||beta|)) keep
// enough digits for 1e-10 certification.

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "kerrgauge/phase_core.hpp"

namespace kerrgauge::oracle {

using lcplx = std::complex<long double>;
using FockMatrix = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;

/// Largest probability mass a truncation may drop.
inline constexpr double kMaxTail = 1e-12;

/// <a>(t) = alpha0 exp[|alpha0|^2 (e^{-it} - 1) - it/2] for an initial coherent state.
cplx exact_amplitude(cplx alpha0, double t);

/// <Y>(t) = Im <a>(t).
double exact_y(cplx alpha0, double t);

/// Exact expectation of the observable; mode_amplitude reports Re<a>.
double exact_observable(ObservableKind kind, cplx alpha0, double t);

/// Conservative cutoff |alpha|^2 + 10|alpha| + 10, rounded up.
int recommended_cutoff(double radius);

/// Poisson(radius^2) mass above `cutoff`: the part of a coherent state of
/// amplitude `radius` that a basis {0..cutoff} loses.
double coherent_tail(double radius, int cutoff);

/// Throws CutoffError when coherent_tail(radius, cutoff) > kMaxTail.
void require_cutoff(double radius, int cutoff);

/// Truncated annihilation operator on {0..cutoff}.
FockMatrix annihilation(int cutoff);

/// Truncated matrix of the observable.
FockMatrix observable_matrix(ObservableKind kind, int cutoff);

/// Un-normalized coherent vector ||alpha> = sum alpha^n / sqrt(n!) |n>.
Eigen::Matrix<lcplx, Eigen::Dynamic, 1> coherent_vector(lcplx alpha, int cutoff);

struct FockDensityMatrix {
  int cutoff = 0;
  FockMatrix rho;

  [[nodiscard]] lcplx trace() const { return rho.trace(); }
  [[nodiscard]] long double purity() const { return (rho * rho).trace().real(); }
  /// Tr[O rho].
  [[nodiscard]] cplx expectation(ObservableKind kind) const;
};

/// Normalized coherent density matrix. Throws CutoffError per require_cutoff.
FockDensityMatrix coherent_density(cplx alpha0, int cutoff);

/// rho_nm(t) = rho_nm(0) exp[-i (n^2 - m^2) t / 2], the exact solution of
/// d rho / dt = -i [H, rho] from a coherent state.
FockDensityMatrix fock_evolve(cplx alpha0, double t, int cutoff);

struct FockKernel {
  FockMatrix lambda;
  lcplx trace;
  /// Tr[O Lambda] / Tr[Lambda], indexed like kAllObservables.
  std::array<cplx, 4> ratios{};
  /// |Tr Lambda| < 1e-12 * 2 exp(|alpha||beta|).
  bool singular = false;
  /// Tr[a Lambda] / Tr[Lambda] and Tr[a^dag Lambda] / Tr[Lambda].
  cplx ratio_annihilation;
  cplx ratio_creation;

  [[nodiscard]] cplx ratio(ObservableKind kind) const {
    return ratios[static_cast<std::size_t>(kind)];
  }
};

/// Lambda = e^{i theta} ||alpha><beta|| + h.c. on {0..cutoff}.
FockMatrix kernel_matrix(lcplx alpha, lcplx beta, long double theta, int cutoff);

/// Kernel matrix with its trace ratios. Throws CutoffError when the basis
/// does not cover max(|alpha|, |beta|).
FockKernel fock_kernel(cplx alpha, cplx beta, double theta, int cutoff);

/// Relative Frobenius residual ||N Lambda - D Lambda|| / ||N Lambda||, where
/// N = a^dag a and D = alpha d/dalpha + beta d/dbeta with holomorphic
/// (Wirtinger) derivatives taken by central differences of step h:
///   d/dalpha ~ [L(alpha+h) - L(alpha-h) - i (L(alpha+ih) - L(alpha-ih))] / (4h).
/// Returns the absolute residual when N Lambda vanishes.
double number_identity_residual(cplx alpha, cplx beta, double theta, int cutoff, double h);

}  // namespace kerrgauge::oracle
