#pragma once

// Cross-checks between the closed-form expressions and the number-basis oracle.

#include <string>
#include <vector>

namespace kerrgauge {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// exact_y against the evolved number-basis state at 100 times in [0, 8]
/// (alpha0 = 3, cutoff 40); |difference| < 1e-10.
CheckOutcome check_oracle_agreement();

/// Closed-form trace ratios and kernel traces against the number-basis kernel
/// on 100 random states with |alpha|, |beta| <= 3; relative error < 1e-10.
CheckOutcome check_estimator_certification();

/// a^dag a Lambda = (alpha d/dalpha + beta d/dbeta) Lambda by central
/// differences: residual < 1e-6 at h = 1e-4, convergence order 2 +- 0.2.
CheckOutcome check_number_identity();

std::vector<CheckOutcome> run_selftest();

}  // namespace kerrgauge
