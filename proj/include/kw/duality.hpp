#pragma once

#include "kw/weyl.hpp"

namespace kw {

struct DualityReport {
  Complex lambda;
  QEnclosure q;       // principal coefficient of the system
  QEnclosure q_dual;  // principal coefficient of the dual, computed independently
  double identity_residual = 0.0;     // |q_dual + 1/(lambda q)|
  double residual_bound = 0.0;        // 2 * propagated enclosure radii + 1e-8
  double conjugation_residual = 0.0;  // fundamental-matrix conjugation check
  double regular_branch_residual = 0.0;  // |q_dual + c1(b)/(lambda s1(b))|, regular only
  bool pass() const { return identity_residual <= residual_bound; }
};

// Residual of U_swap(x, lambda) = D(lambda)^{-1} U(x, lambda) D(lambda) with
// D = [[0, -1/lambda], [1, 0]], where U_swap propagates the plainly swapped
// pair S[R2, R1]. Relative to the entry size. Errc::ExcludedPoint at
// lambda = 0.
double check_fundamental_conjugation(const IntegralSystem& sys, double x, Complex lambda);

// q and q_dual are computed by independent propagation of the system and of
// dual(system); the identity is never used to produce either side.
DualityReport check_duality_identity(const IntegralSystem& sys, Complex lambda, double tol,
                                     int budget = 200);

}  // namespace kw
