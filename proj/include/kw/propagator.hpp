#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "kw/system.hpp"

namespace kw {

using Complex = std::complex<double>;

// Value of the fundamental matrix U(x, lambda) = [[c1, s1], [c2, s2]]; the
// columns are the solutions with initial data (1,0)^T and (0,1)^T. The true
// matrix is exp(log_scale) times the stored entries: propagation over long
// stretches at negative or complex lambda grows exponentially, so products
// renormalize themselves instead of overflowing. Ratios of entries (all the
// Weyl machinery) never see the scale; log_scale stays 0 for moderate input.
struct FundamentalMatrix {
  Complex c1{1.0}, s1{0.0};
  Complex c2{0.0}, s2{1.0};
  double log_scale = 0.0;

  Complex det() const { return c1 * s2 - c2 * s1; }  // of the stored entries
  double max_abs() const {
    return std::max(std::max(std::abs(c1), std::abs(s1)),
                    std::max(std::abs(c2), std::abs(s2)));
  }
  void rescale() {
    double m = max_abs();
    if (m > 1e100 || (m > 0.0 && m < 1e-100)) {
      c1 /= m; s1 /= m; c2 /= m; s2 /= m;
      log_scale += std::log(m);
    }
  }
  // entries times exp(log_scale); overflows for extreme scales, callers that
  // compare raw entries keep arguments moderate
  FundamentalMatrix unscaled() const {
    double f = std::exp(log_scale);
    return {c1 * f, s1 * f, c2 * f, s2 * f, 0.0};
  }
};

// One solution pair (u1, u2) of the system at a point.
struct StateVector {
  Complex u1{0.0}, u2{0.0};
};

// Value of a solution after a transfer factor (or after U(x) itself):
// u(x) = U(x) u(0).
inline StateVector apply(const FundamentalMatrix& U, StateVector u) {
  double f = std::exp(U.log_scale);
  return {f * (U.c1 * u.u1 + U.s1 * u.u2), f * (U.c2 * u.u1 + U.s2 * u.u2)};
}

// Composition: `later` acts on the values produced by `earlier`.
inline FundamentalMatrix operator*(const FundamentalMatrix& later,
                                   const FundamentalMatrix& earlier) {
  FundamentalMatrix r;
  r.c1 = later.c1 * earlier.c1 + later.s1 * earlier.c2;
  r.c2 = later.c2 * earlier.c1 + later.s2 * earlier.c2;
  r.s1 = later.c1 * earlier.s1 + later.s1 * earlier.s2;
  r.s2 = later.c2 * earlier.s1 + later.s2 * earlier.s2;
  r.log_scale = later.log_scale + earlier.log_scale;
  r.rescale();
  return r;
}

// Transfer factor of an R1 jump: u1 gains mass * u2.
FundamentalMatrix atom_factor_r1(double mass);
// Transfer factor of an R2 jump: u2 gains -lambda * mass * u1.
FundamentalMatrix atom_factor_r2(double mass, Complex lambda);
// Transfer over a stretch of length delta with dR1 = alpha dt, dR2 = beta dt:
// [[cos(w), alpha*delta*sinc(w)], [-lambda*beta*delta*sinc(w), cos(w)]] with
// w = sqrt(lambda*alpha*beta)*delta. Even in w, so the branch of the root is
// irrelevant; small |w| goes through a truncated Taylor series.
FundamentalMatrix segment_factor(double alpha, double beta, double delta, Complex lambda);

enum class MeasureRole { R1, R2 };

// Walk [from, to) in position order, applying transfer factors to `state`.
// Callbacks observe the system just before each factor:
//   on_atom(p, role, mass, U)          U = U(p), jump not yet applied
//   on_segment(t0, t1, alpha, beta, U) U = U(t0), atoms at t0 applied
// An atom exactly at `to` is not crossed (left continuity).
template <class SegFn, class AtomFn>
FundamentalMatrix propagate_pieces(const IntegralSystem& sys, Complex lambda, double from,
                                   double to, FundamentalMatrix state, SegFn&& on_segment,
                                   AtomFn&& on_atom) {
  if (!(to > from)) return state;
  std::vector<double> pts{from, to};
  sys.r1().add_breakpoints(from, to, pts);
  sys.r2().add_breakpoints(from, to, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double t = pts[i];
    if (double m2 = sys.r2().mass_at(t); m2 > 0.0) {
      on_atom(t, MeasureRole::R2, m2, state);
      state = atom_factor_r2(m2, lambda) * state;
    }
    if (double m1 = sys.r1().mass_at(t); m1 > 0.0) {
      on_atom(t, MeasureRole::R1, m1, state);
      state = atom_factor_r1(m1) * state;
    }
    double t1 = pts[i + 1];
    double mid = t + (t1 - t) / 2;
    double alpha = sys.r1().density_at(mid);
    double beta = sys.r2().density_at(mid);
    on_segment(t, t1, alpha, beta, state);
    if (alpha != 0.0 || beta != 0.0)
      state = segment_factor(alpha, beta, t1 - t, lambda) * state;
  }
  return state;
}

struct NoSeg {
  void operator()(double, double, double, double, const FundamentalMatrix&) const {}
};
struct NoAtom {
  void operator()(double, MeasureRole, double, const FundamentalMatrix&) const {}
};

// U(x, lambda); an atom sitting exactly at x is excluded.
FundamentalMatrix fundamental_matrix(const IntegralSystem& sys, double x, Complex lambda);
// Right-continuous variant: includes the jump(s) at x. Houses the one-sided
// values entering the shifted Wronskian identities.
FundamentalMatrix fundamental_matrix_right(const IntegralSystem& sys, double x, Complex lambda);
// Apply the atom factors sitting exactly at x to U.
FundamentalMatrix apply_atoms_at(const IntegralSystem& sys, double x, Complex lambda,
                                 FundamentalMatrix U);

// Incremental propagation for truncation schedules: advance_to(x) leaves the
// cursor holding U(x, lambda) with everything in [0, x) applied.
class PropagationCursor {
 public:
  PropagationCursor(const IntegralSystem& sys, Complex lambda)
      : sys_(&sys), lambda_(lambda) {}

  void advance_to(double x) { advance_to(x, NoSeg{}, NoAtom{}); }

  template <class SegFn, class AtomFn>
  void advance_to(double x, SegFn&& on_segment, AtomFn&& on_atom) {
    if (x <= pos_) return;
    state_ = propagate_pieces(*sys_, lambda_, pos_, x, state_, on_segment, on_atom);
    pos_ = x;
  }

  const FundamentalMatrix& matrix() const { return state_; }
  double position() const { return pos_; }

 private:
  const IntegralSystem* sys_;
  Complex lambda_;
  FundamentalMatrix state_{};
  double pos_ = 0.0;
};

// Monodromy over a purely atomic initial stretch, entries as polynomials in
// lambda (real coefficients). Errc::NonAtomicRegion when [0, x) meets a
// density segment or tail.
struct PolyMatrix {
  Poly c1, s1, c2, s2;
};
PolyMatrix monodromy_polynomial(const IntegralSystem& sys, double x);

// Coefficients of the power-series expansion of the first column:
// c1 = sum (-lambda)^n phi_n, c2 = sum_{n>=1} (-lambda)^n psi_n, computed as
// iterated Stieltjes integrals, exact for this measure class.
struct SeriesCoefficients {
  std::vector<double> phi;  // phi[0] = phi_1(x), ...
  std::vector<double> psi;
  int order = 0;
};
SeriesCoefficients series_coefficients(const IntegralSystem& sys, double x, int order);

// Residuals of the structural identities at (x, lambda[, mu]), each
// normalized by the size of the terms entering it.
double check_wronskian(const IntegralSystem& sys, double x, Complex lambda);
double check_green(const IntegralSystem& sys, double x, Complex lambda, Complex mu);
double check_kernel_identity(const IntegralSystem& sys, double x, Complex lambda, Complex mu);

struct IdentityResiduals {
  double wronskian = 0.0;
  double green = 0.0;
  double kernel = 0.0;
  double max_residual() const { return std::max(wronskian, std::max(green, kernel)); }
};
IdentityResiduals check_identities(const IntegralSystem& sys, double x, Complex lambda,
                                   Complex mu);

// Composite 16-point Gauss-Legendre on [a, b] with one refinement (the value
// of the two-panel pass). Quadrature contract for all solution-product
// integrals; atoms are always summed exactly by the callers.
double gl16_refined(double a, double b, const std::function<double(double)>& f);
Complex gl16_refined_c(double a, double b, const std::function<Complex(double)>& f);

}  // namespace kw
