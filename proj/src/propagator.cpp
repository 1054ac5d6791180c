#include "kw/propagator.hpp"

#include <array>
#include <cmath>

namespace kw {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 16> kGlNodes = {
    -0.9894009349916499326, -0.9445750230732325761, -0.8656312023878317439,
    -0.7554044083550030339, -0.6178762444026437484, -0.4580167776572273863,
    -0.2816035507792589132, -0.0950125098376374402, 0.0950125098376374402,
    0.2816035507792589132,  0.4580167776572273863,  0.6178762444026437484,
    0.7554044083550030339,  0.8656312023878317439,  0.9445750230732325761,
    0.9894009349916499326};
constexpr std::array<double, 16> kGlWeights = {
    0.0271524594117540949, 0.0622535239386478929, 0.0951585116824927848,
    0.1246289712555338721, 0.1495959888165767321, 0.1691565193950025382,
    0.1826034150449235889, 0.1894506104550684963, 0.1894506104550684963,
    0.1826034150449235889, 0.1691565193950025382, 0.1495959888165767321,
    0.1246289712555338721, 0.0951585116824927848, 0.0622535239386478929,
    0.0271524594117540949};

template <class T, class F>
T gl16_panel(double a, double b, const F& f) {
  double h = (b - a) / 2, c = a + h;
  T sum{};
  for (std::size_t i = 0; i < 16; ++i) sum += T(kGlWeights[i] * h) * f(c + h * kGlNodes[i]);
  return sum;
}

template <class T, class F>
T gl16_two_panel(double a, double b, const F& f) {
  double m = a + (b - a) / 2;
  return gl16_panel<T>(a, m, f) + gl16_panel<T>(m, b, f);
}

// cos(sqrt(w)) and sin(sqrt(w))/sqrt(w), entire in w; near zero the direct
// forms lose digits, so a truncated series takes over.
struct TrigPair {
  Complex cosv, sincv;
  double log_scale;  // both values carry the common factor exp(log_scale)
};

TrigPair trig_of_square(Complex w) {
  if (std::abs(w) < 1e-8) {
    Complex c{1.0}, s{1.0}, term{1.0};
    // cos(sqrt(w)) = sum (-w)^k/(2k)!, sinc = sum (-w)^k/(2k+1)!
    for (int k = 1; k <= 8; ++k) {
      term *= -w / double((2 * k - 1) * (2 * k));
      c += term;
      s += term / double(2 * k + 1);
    }
    return {c, s, 0.0};
  }
  Complex z = std::sqrt(w);
  double y = z.imag();
  if (std::abs(y) <= 30.0) {
    return {std::cos(z), std::sin(z) / z, 0.0};
  }
  // exp(|Im z|) dominates; factor it out instead of overflowing
  double sigma = std::abs(y);
  Complex eix = std::exp(Complex(0.0, z.real()));
  Complex small = std::exp(Complex(-2.0 * sigma, 0.0));
  Complex c, s;
  if (y > 0) {
    c = (eix * small + 1.0 / eix) / 2.0;
    s = (eix * small - 1.0 / eix) / Complex(0.0, 2.0);
  } else {
    c = (eix + small / eix) / 2.0;
    s = (eix - small / eix) / Complex(0.0, 2.0);
  }
  return {c, s / z, sigma};
}

}  // namespace

FundamentalMatrix atom_factor_r1(double mass) {
  return {Complex{1.0}, Complex{mass}, Complex{0.0}, Complex{1.0}, 0.0};
}

FundamentalMatrix atom_factor_r2(double mass, Complex lambda) {
  return {Complex{1.0}, Complex{0.0}, -lambda * mass, Complex{1.0}, 0.0};
}

FundamentalMatrix segment_factor(double alpha, double beta, double delta, Complex lambda) {
  Complex w = lambda * alpha * beta * delta * delta;
  TrigPair t = trig_of_square(w);
  FundamentalMatrix f;
  f.c1 = t.cosv;
  f.s1 = alpha * delta * t.sincv;
  f.c2 = -lambda * beta * delta * t.sincv;
  f.s2 = t.cosv;
  f.log_scale = t.log_scale;
  f.rescale();
  return f;
}

FundamentalMatrix fundamental_matrix(const IntegralSystem& sys, double x, Complex lambda) {
  return propagate_pieces(sys, lambda, 0.0, x, FundamentalMatrix{}, NoSeg{}, NoAtom{});
}

FundamentalMatrix apply_atoms_at(const IntegralSystem& sys, double x, Complex lambda,
                                 FundamentalMatrix U) {
  if (double m2 = sys.r2().mass_at(x); m2 > 0.0) U = atom_factor_r2(m2, lambda) * U;
  if (double m1 = sys.r1().mass_at(x); m1 > 0.0) U = atom_factor_r1(m1) * U;
  return U;
}

FundamentalMatrix fundamental_matrix_right(const IntegralSystem& sys, double x, Complex lambda) {
  return apply_atoms_at(sys, x, lambda, fundamental_matrix(sys, x, lambda));
}

// ---------------------------------------------------------------------------
// Polynomial monodromy and series coefficients

PolyMatrix monodromy_polynomial(const IntegralSystem& sys, double x) {
  auto check_atomic = [&](const StieltjesMeasure& m) {
    for (const Segment& s : m.segments())
      if (s.start < x && s.end > 0.0)
        fail(Errc::NonAtomicRegion, "density segment inside the requested region");
    if (m.infinite() && m.b_rep() < x)
      fail(Errc::NonAtomicRegion, "tail density inside the requested region");
  };
  check_atomic(sys.r1());
  check_atomic(sys.r2());

  // ordered atom positions in [0, x)
  std::vector<double> pts;
  sys.r1().add_breakpoints(0.0, x, pts);
  sys.r2().add_breakpoints(0.0, x, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  PolyMatrix u{Poly::constant(1.0), Poly::constant(0.0), Poly::constant(0.0),
               Poly::constant(1.0)};
  auto left_multiply = [&u](const Poly& a, const Poly& b, const Poly& c, const Poly& d) {
    // [[a, b], [c, d]] * [[c1, s1], [c2, s2]]
    Poly c1 = a * u.c1 + b * u.c2, s1 = a * u.s1 + b * u.s2;
    Poly c2 = c * u.c1 + d * u.c2, s2 = c * u.s1 + d * u.s2;
    u = {std::move(c1), std::move(s1), std::move(c2), std::move(s2)};
  };
  Poly one = Poly::constant(1.0), zero = Poly::constant(0.0);
  for (double p : pts) {
    if (double m2 = sys.r2().mass_at(p); m2 > 0.0)
      left_multiply(one, zero, Poly({0.0, -m2}), one);  // u2 += -lambda*m2*u1
    if (double m1 = sys.r1().mass_at(p); m1 > 0.0)
      left_multiply(one, Poly::constant(m1), zero, one);
  }
  return u;
}

SeriesCoefficients series_coefficients(const IntegralSystem& sys, double x, int order) {
  if (order < 1) fail(Errc::ExcludedPoint, "series order must be >= 1");
  SeriesCoefficients out;
  out.order = order;
  out.phi.reserve(std::size_t(order));
  out.psi.reserve(std::size_t(order));
  // psi_n = int phi_{n-1} dR2, phi_n = int psi_n dR1, phi_0 = 1
  PiecewisePoly phi_prev = PiecewisePoly::constant(1.0, x);
  for (int n = 1; n <= order; ++n) {
    PiecewisePoly psi_n = integrate_profile(phi_prev, sys.r2(), x);
    PiecewisePoly phi_n = integrate_profile(psi_n, sys.r1(), x);
    out.psi.push_back(psi_n.eval_left(x));
    out.phi.push_back(phi_n.eval_left(x));
    phi_prev = std::move(phi_n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural identity checks

double gl16_refined(double a, double b, const std::function<double(double)>& f) {
  return gl16_two_panel<double>(a, b, f);
}

Complex gl16_refined_c(double a, double b, const std::function<Complex(double)>& f) {
  return gl16_two_panel<Complex>(a, b, f);
}

double check_wronskian(const IntegralSystem& sys, double x, Complex lambda) {
  FundamentalMatrix U = fundamental_matrix(sys, x, lambda).unscaled();
  FundamentalMatrix Up = apply_atoms_at(sys, x, lambda, U);
  double scale = std::max(1.0, std::max(std::abs(U.c1 * U.s2), std::abs(U.c2 * U.s1)));
  double r0 = std::abs(U.det() - 1.0);
  double rp = std::abs(Up.c1 * U.s2 - U.c2 * Up.s1 - 1.0);
  double rq = std::abs(U.c1 * Up.s2 - Up.c2 * U.s1 - 1.0);
  return std::max({r0, rp, rq}) / scale;
}

namespace {

// Everything a quadrature needs about one stretch or jump of [0, x).
struct Piece {
  bool is_atom = false;
  double a = 0, b = 0;            // stretch
  double alpha = 0, beta = 0;     // densities on it
  MeasureRole role = MeasureRole::R2;
  double mass = 0;                // jump
  FundamentalMatrix U;            // state entering the piece
};

std::vector<Piece> collect_pieces(const IntegralSystem& sys, double x, Complex lambda) {
  std::vector<Piece> out;
  propagate_pieces(
      sys, lambda, 0.0, x, FundamentalMatrix{},
      [&](double a, double b, double alpha, double beta, const FundamentalMatrix& U) {
        Piece p;
        p.a = a; p.b = b; p.alpha = alpha; p.beta = beta; p.U = U;
        out.push_back(p);
      },
      [&](double p0, MeasureRole role, double mass, const FundamentalMatrix& U) {
        Piece p;
        p.is_atom = true;
        p.a = p0; p.role = role; p.mass = mass; p.U = U;
        out.push_back(p);
      });
  return out;
}

// Solution values at an interior point of a stretch.
FundamentalMatrix piece_value(const Piece& p, Complex lambda, double t) {
  return segment_factor(p.alpha, p.beta, t - p.a, lambda) * p.U;
}

// \int over [0, x) of f(U_lambda(t), U_mu(t)) against dR2 or dR1, atoms exact,
// stretches by the documented Gauss-Legendre contract. The two piece lists
// come from traversals of the same interval, so they line up index by index.
Complex product_integral(const std::vector<Piece>& pl, const std::vector<Piece>& pm,
                         Complex lambda, Complex mu, MeasureRole against,
                         const std::function<Complex(const FundamentalMatrix&,
                                                     const FundamentalMatrix&)>& f) {
  Complex total = 0.0;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const Piece& a = pl[i];
    const Piece& b = pm[i];
    if (a.is_atom) {
      if (a.role == against) total += a.mass * f(a.U.unscaled(), b.U.unscaled());
      continue;
    }
    double dens = against == MeasureRole::R2 ? a.beta : a.alpha;
    if (dens == 0.0) continue;
    total += dens * gl16_two_panel<Complex>(a.a, a.b, [&](double t) {
      return f(piece_value(a, lambda, t).unscaled(), piece_value(b, mu, t).unscaled());
    });
  }
  return total;
}

}  // namespace

double check_green(const IntegralSystem& sys, double x, Complex lambda, Complex mu) {
  std::vector<Piece> pl = collect_pieces(sys, x, lambda);
  std::vector<Piece> pm = collect_pieces(sys, x, mu);
  FundamentalMatrix Ul = fundamental_matrix(sys, x, lambda).unscaled();
  FundamentalMatrix Um = fundamental_matrix(sys, x, mu).unscaled();

  struct Col {
    Complex FundamentalMatrix::*first;
    Complex FundamentalMatrix::*second;
    Complex at0_first;   // component values at x = 0
    Complex at0_second;
  };
  const Col cols[2] = {
      {&FundamentalMatrix::c1, &FundamentalMatrix::c2, Complex{1.0}, Complex{0.0}},
      {&FundamentalMatrix::s1, &FundamentalMatrix::s2, Complex{0.0}, Complex{1.0}}};

  double worst = 0.0;
  for (const Col& cu : cols) {
    for (const Col& cv : cols) {
      Complex cross = product_integral(
          pl, pm, lambda, mu, MeasureRole::R2,
          [&](const FundamentalMatrix& a, const FundamentalMatrix& b) {
            return a.*(cu.first) * b.*(cv.first);
          });

      // first identity: \int f v1 dR2 = \int u2 v2 dR1 - u2 v1 |_0^x, f = lambda u1
      Complex lhs = lambda * cross;
      Complex dirichlet = product_integral(
          pl, pm, lambda, mu, MeasureRole::R1,
          [&](const FundamentalMatrix& a, const FundamentalMatrix& b) {
            return a.*(cu.second) * b.*(cv.second);
          });
      Complex boundary = Ul.*(cu.second) * Um.*(cv.first) - cu.at0_second * cv.at0_first;
      Complex rhs = dirichlet - boundary;
      double scale = std::max({1.0, std::abs(lhs), std::abs(dirichlet), std::abs(boundary)});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);

      // second identity: \int (f v1 - u1 g) dR2 = [u, v](x) - [u, v](0)
      Complex lhs2 = (lambda - mu) * cross;
      Complex wron_x = Ul.*(cu.first) * Um.*(cv.second) - Ul.*(cu.second) * Um.*(cv.first);
      Complex wron_0 = cu.at0_first * cv.at0_second - cu.at0_second * cv.at0_first;
      double scale2 = std::max({1.0, std::abs(lhs2), std::abs(wron_x)});
      worst = std::max(worst, std::abs(lhs2 - (wron_x - wron_0)) / scale2);
    }
  }
  return worst;
}

double check_kernel_identity(const IntegralSystem& sys, double x, Complex lambda, Complex mu) {
  FundamentalMatrix Ul = fundamental_matrix(sys, x, lambda).unscaled();
  FundamentalMatrix Um = fundamental_matrix(sys, x, mu).unscaled();
  Complex mubar = std::conj(mu);
  std::vector<Piece> pl = collect_pieces(sys, x, lambda);
  std::vector<Piece> pmb = collect_pieces(sys, x, mubar);

  // J - U(x,mu)^* J U(x,lambda)
  // U^* J U = [[cb1, cb2],[sb1, sb2]] [[0,-1],[1,0]] [[c1,s1],[c2,s2]]
  Complex cb1 = std::conj(Um.c1), cb2 = std::conj(Um.c2);
  Complex sb1 = std::conj(Um.s1), sb2 = std::conj(Um.s2);
  Complex m11 = cb2 * Ul.c1 - cb1 * Ul.c2;
  Complex m12 = cb2 * Ul.s1 - cb1 * Ul.s2;
  Complex m21 = sb2 * Ul.c1 - sb1 * Ul.c2;
  Complex m22 = sb2 * Ul.s1 - sb1 * Ul.s2;
  Complex L11 = -m11, L12 = -1.0 - m12, L21 = 1.0 - m21, L22 = -m22;

  Complex factor = -(lambda - mubar);
  auto entry = [&](Complex FundamentalMatrix::*pa, Complex FundamentalMatrix::*pb) {
    return factor * product_integral(pmb, pl, mubar, lambda, MeasureRole::R2,
                                     [&](const FundamentalMatrix& a, const FundamentalMatrix& b) {
                                       return a.*pa * b.*pb;
                                     });
  };
  Complex R11 = entry(&FundamentalMatrix::c1, &FundamentalMatrix::c1);
  Complex R12 = entry(&FundamentalMatrix::c1, &FundamentalMatrix::s1);
  Complex R21 = entry(&FundamentalMatrix::s1, &FundamentalMatrix::c1);
  Complex R22 = entry(&FundamentalMatrix::s1, &FundamentalMatrix::s1);

  double scale = std::max(1.0, std::max({std::abs(m11), std::abs(m12), std::abs(m21),
                                         std::abs(m22)}));
  double r = std::max({std::abs(L11 - R11), std::abs(L12 - R12), std::abs(L21 - R21),
                       std::abs(L22 - R22)});
  return r / scale;
}

IdentityResiduals check_identities(const IntegralSystem& sys, double x, Complex lambda,
                                   Complex mu) {
  return {check_wronskian(sys, x, lambda), check_green(sys, x, lambda, mu),
          check_kernel_identity(sys, x, lambda, mu)};
}

}  // namespace kw
