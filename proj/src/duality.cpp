#include "kw/duality.hpp"

#include <cmath>

namespace kw {

double check_fundamental_conjugation(const IntegralSystem& sys, double x, Complex lambda) {
  if (lambda == Complex{0.0})
    fail(Errc::ExcludedPoint, "D(lambda) is singular at lambda = 0");
  IntegralSystem swapped = IntegralSystem::unchecked(sys.r2(), sys.r1());
  FundamentalMatrix direct = fundamental_matrix(swapped, x, lambda);
  FundamentalMatrix U = fundamental_matrix(sys, x, lambda);

  // D^{-1} U D with D = [[0, -1/lambda], [1, 0]]
  FundamentalMatrix conj_form;
  conj_form.c1 = U.s2;
  conj_form.s1 = -U.c2 / lambda;
  conj_form.c2 = -lambda * U.s1;
  conj_form.s2 = U.c1;
  conj_form.log_scale = U.log_scale;

  // compare at a common scale
  double s = std::max(direct.log_scale, conj_form.log_scale);
  double fd = std::exp(direct.log_scale - s);
  double fc = std::exp(conj_form.log_scale - s);
  auto diff = [&](Complex a, Complex b) { return std::abs(a * fd - b * fc); };
  double r = std::max({diff(direct.c1, conj_form.c1), diff(direct.s1, conj_form.s1),
                       diff(direct.c2, conj_form.c2), diff(direct.s2, conj_form.s2)});
  double scale = std::max(1.0, std::max(direct.max_abs() * fd, conj_form.max_abs() * fc));
  return r / scale;
}

DualityReport check_duality_identity(const IntegralSystem& sys, Complex lambda, double tol,
                                     int budget) {
  if (lambda == Complex{0.0})
    fail(Errc::ExcludedPoint, "the duality identity carries a 1/lambda factor");

  DualityReport rep;
  rep.lambda = lambda;
  rep.q = principal_q(sys, lambda, tol, budget);
  IntegralSystem d = dual(sys);
  rep.q_dual = principal_q(d, lambda, tol, budget);

  Complex lhs = rep.q_dual.value;
  Complex rhs = -1.0 / (lambda * rep.q.value);
  rep.identity_residual = std::abs(lhs - rhs);
  // first-order propagation of the enclosure radii through -1/(lambda q)
  double dq = rep.q.error_radius / (std::abs(lambda) * std::norm(rep.q.value));
  rep.residual_bound = 2.0 * (rep.q_dual.error_radius + dq) + 1e-8;

  std::vector<double> xs;
  sys.r1().add_breakpoints(0.0, sys.finite_end() + 1.0, xs);
  sys.r2().add_breakpoints(0.0, sys.finite_end() + 1.0, xs);
  xs.push_back(sys.finite_end() + 1.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() > 8) xs.resize(8);
  for (double x : xs)
    rep.conjugation_residual =
        std::max(rep.conjugation_residual, check_fundamental_conjugation(sys, x, lambda));

  if (classify(sys).regular()) {
    FundamentalMatrix U = fundamental_matrix_right(sys, sys.finite_end(), lambda);
    Complex branch = -U.c1 / (lambda * U.s1);
    rep.regular_branch_residual = std::abs(rep.q_dual.value - branch);
  }
  return rep;
}

}  // namespace kw
