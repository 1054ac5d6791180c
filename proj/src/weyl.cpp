#include "kw/weyl.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace kw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool admissible_lambda(Complex lambda) {
  return lambda.imag() != 0.0 || lambda.real() < 0.0;
}

// |entry|^2 carried back to true scale; +inf if it leaves double range.
double abs2_true(Complex v, double log_scale) {
  double a = std::abs(v);
  if (a == 0.0) return 0.0;
  double lg = 2.0 * (log_scale + std::log(a));
  if (lg > 700.0) return kInf;
  return std::exp(lg);
}

// Accumulates \int |c1|^2 dR2 piece by piece along a cursor advance. c is the
// solution multiplying the coefficient in psi = s - m c, so this integral sets
// the disc radius; the same law with s1 in its place fails the disc's own
// membership inequality (see the radius tests).
struct RadiusAccumulator {
  Complex lambda;
  double total = 0.0;

  void on_atom(double, MeasureRole role, double mass, const FundamentalMatrix& U) {
    if (role == MeasureRole::R2) total += mass * abs2_true(U.c1, U.log_scale);
  }
  void on_segment(double a, double b, double alpha, double beta, const FundamentalMatrix& U) {
    if (beta == 0.0) return;
    total += beta * gl16_refined(a, b, [&](double t) {
      FundamentalMatrix V = segment_factor(alpha, beta, t - a, lambda) * U;
      return abs2_true(V.c1, V.log_scale);
    });
  }
};

Complex moebius_center(const FundamentalMatrix& U) {
  Complex num = U.s1 * std::conj(U.c2) - U.s2 * std::conj(U.c1);
  Complex den = U.c1 * std::conj(U.c2) - U.c2 * std::conj(U.c1);
  if (den == Complex{0.0})
    fail(Errc::DivisionDegenerate, "no dR2 mass before the truncation point");
  return num / den;
}

Complex safe_ratio(Complex num, Complex den, const char* what) {
  double scale = std::max(std::abs(num), std::abs(den));
  if (std::abs(den) <= 1e-14 * scale || den == Complex{0.0}) {
    std::ostringstream os;
    os << "degenerate denominator in " << what;
    fail(Errc::DivisionDegenerate, os.str());
  }
  return num / den;
}

// s2(b)/c2(b): u2 is frozen past the support of dR2, evaluate just right of it.
Complex neumann_closed_form(const IntegralSystem& sys, Complex lambda) {
  double xs = sys.r2().sup_support();
  FundamentalMatrix U = fundamental_matrix_right(sys, xs, lambda);
  return safe_ratio(U.s2, U.c2, "s2/c2 past the support of dR2");
}

QEnclosure limit_point_q(const IntegralSystem& sys, Complex lambda, double tol, int budget);

}  // namespace

Complex m_coefficient(const IntegralSystem& sys, double l, std::optional<Complex> h,
                      Complex lambda) {
  if (lambda.imag() == 0.0 && lambda.real() >= 0.0)
    fail(Errc::ExcludedPoint, "m(lambda, l, h) needs Im lambda != 0 or lambda < 0");
  FundamentalMatrix U = fundamental_matrix(sys, l, lambda);
  if (!h) return safe_ratio(U.s2, U.c2, "m(lambda, l, inf)");
  return safe_ratio(U.s1 + *h * U.s2, U.c1 + *h * U.c2, "m(lambda, l, h)");
}

double weyl_radius_integral(const IntegralSystem& sys, double l, Complex lambda) {
  RadiusAccumulator acc{lambda};
  propagate_pieces(
      sys, lambda, 0.0, l, FundamentalMatrix{},
      [&](double a, double b, double al, double be, const FundamentalMatrix& U) {
        acc.on_segment(a, b, al, be, U);
      },
      [&](double p, MeasureRole role, double mass, const FundamentalMatrix& U) {
        acc.on_atom(p, role, mass, U);
      });
  return acc.total;
}

WeylDisc weyl_disc(const IntegralSystem& sys, double l, Complex lambda) {
  if (!(lambda.imag() > 0.0))
    fail(Errc::ImaginaryPartRequired, "Weyl discs are defined for Im lambda > 0");
  FundamentalMatrix U = fundamental_matrix(sys, l, lambda);
  WeylDisc d;
  d.lambda = lambda;
  d.truncation = l;
  d.center = moebius_center(U);
  double integral = weyl_radius_integral(sys, l, lambda);
  d.radius = (integral == kInf) ? 0.0 : 1.0 / (2.0 * lambda.imag() * integral);
  return d;
}

std::vector<double> truncation_schedule(const IntegralSystem& sys, int budget) {
  std::vector<double> pts;
  sys.r1().add_breakpoints(0.0, kInf, pts);
  sys.r2().add_breakpoints(0.0, kInf, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> sched;
  for (double p : pts)
    if (p > 0.0) sched.push_back(p);
  double t = std::max(sys.finite_end(), 1.0);
  while (static_cast<int>(sched.size()) < budget) {
    sched.push_back(t);
    t *= 2.0;
  }
  if (static_cast<int>(sched.size()) > budget) sched.resize(std::size_t(budget));
  return sched;
}

namespace {

QEnclosure limit_point_q(const IntegralSystem& sys, Complex lambda, double tol, int budget) {
  bool lower_half = lambda.imag() < 0.0;
  Complex lam = lower_half ? std::conj(lambda) : lambda;
  std::vector<double> sched = truncation_schedule(sys, budget);

  PropagationCursor cursor(sys, lam);
  RadiusAccumulator acc{lam};
  int steps = 0;
  double last_radius = kInf;

  for (double l : sched) {
    ++steps;
    cursor.advance_to(
        l,
        [&](double a, double b, double al, double be, const FundamentalMatrix& U) {
          acc.on_segment(a, b, al, be, U);
        },
        [&](double p, MeasureRole role, double mass, const FundamentalMatrix& U) {
          acc.on_atom(p, role, mass, U);
        });
    const FundamentalMatrix& U = cursor.matrix();

    if (lam.imag() > 0.0) {
      if (acc.total == 0.0) continue;  // disc still degenerate
      double radius = (acc.total == kInf) ? 0.0 : 1.0 / (2.0 * lam.imag() * acc.total);
      last_radius = radius;
      if (radius < tol) {
        Complex center = moebius_center(U);
        return {lower_half ? std::conj(center) : center, radius, QRegime::LimitPointNested};
      }
    } else {
      // lambda < 0: monotone bracket s1/c1 <= q <= s2/c2
      if (std::abs(U.c2) == 0.0) continue;
      double lo = (U.s1 / U.c1).real();
      double hi = (U.s2 / U.c2).real();
      double half = std::max(0.0, (hi - lo) / 2.0);
      last_radius = half;
      if (half < tol)
        return {Complex{lo + half, 0.0}, half, QRegime::LimitPointNested};
    }
  }
  std::ostringstream os;
  os << "enclosure did not reach tol = " << tol << " after " << steps
     << " truncations (last radius " << last_radius << ")";
  fail(Errc::ToleranceUnreachable, os.str());
}

}  // namespace

QEnclosure principal_q(const IntegralSystem& sys, Complex lambda, double tol, int budget) {
  if (!admissible_lambda(lambda))
    fail(Errc::ExcludedPoint, "q(lambda) is evaluated off [0, inf)");
  Classification cls = classify(sys);
  if (cls.regular()) {
    FundamentalMatrix U = fundamental_matrix_right(sys, sys.finite_end(), lambda);
    return {safe_ratio(U.s1, U.c1, "s1(b)/c1(b)"), 0.0, QRegime::RegularClosedForm};
  }
  if (cls.limit_circle())
    return {neumann_closed_form(sys, lambda), 0.0, QRegime::LimitCircleClosedForm};
  return limit_point_q(sys, lambda, tol, budget);
}

Complex neumann_m(const IntegralSystem& sys, Complex lambda, double tol, int budget) {
  Classification cls = classify(sys);
  if (cls.limit_circle()) return neumann_closed_form(sys, lambda);
  return principal_q(sys, lambda, tol, budget).value;
}

double neumann_asymptotics(const IntegralSystem& sys, AsymptoticProbe probe) {
  switch (probe) {
    case AsymptoticProbe::MinusInfinity:
      return sys.r1().eval_right(sys.r2().inf_support());
    case AsymptoticProbe::ZeroMinus: {
      if (sys.r2().infinite())
        fail(Errc::InfiniteR2Total, "zero-limit probe needs R2(b) < infinity");
      return -1.0 / sys.r2().total_variation();
    }
  }
  fail(Errc::ExcludedPoint, "unknown probe");
}

std::vector<std::pair<double, double>> slp_diagnostic(const IntegralSystem& sys, double lambda,
                                                      const std::vector<double>& grid,
                                                      double tol, int budget) {
  if (!(lambda < 0.0)) fail(Errc::ExcludedPoint, "diagnostic runs at real lambda < 0");
  if (classify(sys).regular())
    fail(Errc::NotSingular, "the endpoint trace is a singular-system diagnostic");
  Complex q = principal_q(sys, Complex{lambda, 0.0}, tol, budget).value;

  std::vector<std::pair<double, double>> trace;
  trace.reserve(grid.size());
  for (double x : grid) {
    FundamentalMatrix U = fundamental_matrix(sys, x, Complex{lambda, 0.0});
    double a1 = std::abs(U.s1 - q * U.c1);
    double a2 = std::abs(U.s2 - q * U.c2);
    double value = 0.0;
    if (a1 > 0.0 && a2 > 0.0) {
      double lg = 2.0 * U.log_scale + std::log(a1) + std::log(a2);
      value = (lg > 700.0) ? kInf : std::exp(lg);
    }
    trace.emplace_back(x, value);
  }
  return trace;
}

}  // namespace kw
