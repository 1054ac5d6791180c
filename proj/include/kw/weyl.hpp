#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kw/propagator.hpp"

namespace kw {

// Image of the closed upper half-plane of boundary parameters h under
// h -> m(lambda, l, h); a disc in the upper half-plane. radius follows the
// integral law 1 / (2 Im(lambda) \int_0^l |c1|^2 dR2) (c is the solution the
// coefficient multiplies in psi = s - m c), center comes from the Moebius
// circle-center formula applied to the four matrix entries.
struct WeylDisc {
  Complex center;
  double radius = 0.0;
  double truncation = 0.0;
  Complex lambda;
};

enum class QRegime { RegularClosedForm, LimitCircleClosedForm, LimitPointNested };

// q(lambda) with a rigorous error radius: zero in the closed-form regimes,
// the final disc radius (or half the monotone bracket) in the nested one.
struct QEnclosure {
  Complex value;
  double error_radius = 0.0;
  QRegime regime = QRegime::RegularClosedForm;
};

// m(lambda, l, h) = (s1 + h s2) / (c1 + h c2) at x = l; h == nullopt means
// h = infinity, giving s2/c2. Errc::DivisionDegenerate when the denominator
// vanishes (an eigenvalue of the truncated problem).
Complex m_coefficient(const IntegralSystem& sys, double l, std::optional<Complex> h,
                      Complex lambda);

// Errc::ImaginaryPartRequired unless Im lambda > 0; Errc::DivisionDegenerate
// when no dR2 mass lies before the truncation.
WeylDisc weyl_disc(const IntegralSystem& sys, double l, Complex lambda);

// \int_0^l |c1(t, lambda)|^2 dR2(t), the disc-radius integral: atoms exact,
// stretches by the standard quadrature contract. +infinity once the integrand
// outgrows double range.
double weyl_radius_integral(const IntegralSystem& sys, double l, Complex lambda);

// Truncation points used by the nested-disc iteration: every representation
// breakpoint, then doubling into the tail from max(finite_end, 1).
std::vector<double> truncation_schedule(const IntegralSystem& sys, int budget);

// The principal Titchmarsh-Weyl coefficient.
//   Regular:            s1(b)/c1(b), exact
//   Singular LC:        s2(b)/c2(b) past the support of dR2, exact
//   Singular LP:        nested discs (Im lambda != 0) or the monotone bracket
//                       s1/c1 <= q <= s2/c2 (lambda < 0); stops when the
//                       enclosure radius drops below tol.
// Errc::ExcludedPoint for lambda on [0, inf); Errc::ToleranceUnreachable when
// the schedule budget runs out.
QEnclosure principal_q(const IntegralSystem& sys, Complex lambda, double tol,
                       int budget = 200);

// The Neumann m-function: s2(b)/c2(b) in the regular and limit-circle cases,
// the principal coefficient in the limit-point case.
Complex neumann_m(const IntegralSystem& sys, Complex lambda, double tol, int budget = 200);

enum class AsymptoticProbe { MinusInfinity, ZeroMinus };

// Boundary limits of the Neumann m-function, computed from the measures
// alone (no propagation):
//   MinusInfinity -> R1+(a), a = inf supp dR2
//   ZeroMinus     -> -1/R2(b)   (Errc::InfiniteR2Total when R2(b) = inf)
double neumann_asymptotics(const IntegralSystem& sys, AsymptoticProbe probe);

// Trace of |psi1 psi2| along `grid` for the Weyl solution
// psi = s - q(lambda) c, lambda < 0. In the limit-point case the product
// decays towards the endpoint. Errc::NotSingular on regular systems.
std::vector<std::pair<double, double>> slp_diagnostic(const IntegralSystem& sys, double lambda,
                                                      const std::vector<double>& grid,
                                                      double tol, int budget = 200);

}  // namespace kw
