#include "doctest.h"

#include <cmath>
#include <complex>

#include "kw/propagator.hpp"
#include "oracles.hpp"

using namespace kw;
using doctest::Approx;

namespace {

IntegralSystem lc_string(double m0) {
  return IntegralSystem::validate(StieltjesMeasure({}, {}, 1.0),
                                  StieltjesMeasure({{0.0, m0}}, {}));
}

double entry_diff(const FundamentalMatrix& a, const FundamentalMatrix& b) {
  FundamentalMatrix ua = a.unscaled(), ub = b.unscaled();
  return std::max({std::abs(ua.c1 - ub.c1), std::abs(ua.s1 - ub.s1),
                   std::abs(ua.c2 - ub.c2), std::abs(ua.s2 - ub.s2)});
}

}  // namespace

TEST_CASE("atom factors") {
  Complex lam{1.0, 0.0};
  FundamentalMatrix r1 = atom_factor_r1(0.5);
  CHECK(r1.c1 == Complex{1.0});
  CHECK(r1.s1 == Complex{0.5});
  CHECK(r1.det() == Complex{1.0});

  // a jump of dR1 moves the state (0,1)^T to (mass, 1)^T
  StateVector after = apply(r1, StateVector{Complex{0.0}, Complex{1.0}});
  CHECK(after.u1 == Complex{0.5});
  CHECK(after.u2 == Complex{1.0});

  FundamentalMatrix r2 = atom_factor_r2(2.0, lam);
  CHECK(r2.c2 == Complex{-2.0});
  CHECK(r2.det() == Complex{1.0});
  CHECK(atom_factor_r2(2.0, Complex{0.0}).c2 == Complex{0.0});

  // one string cell: dR1 length l after dR2 mass m
  double l = 0.75, m = 1.25;
  FundamentalMatrix cell = atom_factor_r1(l) * atom_factor_r2(m, lam);
  CHECK(cell.c1 == Complex{1.0} - lam * l * m);
  CHECK(cell.s1 == Complex{l});
  CHECK(cell.c2 == -lam * m);
  CHECK(cell.s2 == Complex{1.0});
}

TEST_CASE("segment factor degenerate densities") {
  Complex lam{2.0, -1.0};
  FundamentalMatrix a0 = segment_factor(0.0, 3.0, 0.5, lam);
  CHECK(a0.c1 == Complex{1.0});
  CHECK(a0.s1 == Complex{0.0});
  CHECK(a0.c2 == -lam * 3.0 * 0.5);
  FundamentalMatrix b0 = segment_factor(2.0, 0.0, 0.5, lam);
  CHECK(b0.s1 == Complex{1.0});
  CHECK(b0.c2 == Complex{0.0});
}

TEST_CASE("segment factor matches cosh/sinh on the negative axis") {
  for (double t : {0.5, 1.0, 4.0}) {
    double delta = 0.8;
    FundamentalMatrix f = segment_factor(1.0, 1.0, delta, Complex{-t, 0.0});
    double y = std::sqrt(t) * delta;
    CHECK(f.c1.real() == Approx(std::cosh(y)).epsilon(1e-12));
    CHECK(f.s1.real() == Approx(std::sinh(y) / std::sqrt(t)).epsilon(1e-12));
    CHECK(f.c2.real() == Approx(std::sqrt(t) * std::sinh(y)).epsilon(1e-12));
    CHECK(std::abs(f.det() - 1.0) < 1e-12);
  }
}

TEST_CASE("segment factor against the Picard oracle") {
  oracles::Fleet fleet(31);
  for (int rep = 0; rep < 20; ++rep) {
    double alpha = fleet.pick(0, 8) / 4.0;
    double beta = fleet.pick(1, 8) / 4.0;
    double delta = fleet.pick(1, 6) / 4.0;
    Complex lam = oracles::moderate_lambdas()[std::size_t(rep) % 8];
    FundamentalMatrix f = segment_factor(alpha, beta, delta, lam);
    oracles::PicardMatrix p = oracles::picard_segment(alpha, beta, delta, lam);
    CHECK(std::abs(f.c1 - p.c1) < 1e-12);
    CHECK(std::abs(f.s1 - p.s1) < 1e-12);
    CHECK(std::abs(f.c2 - p.c2) < 1e-12);
    CHECK(std::abs(f.s2 - p.s2) < 1e-12);
  }
}

TEST_CASE("segment factor is even in the root") {
  // recompute the entries from -sqrt(w) by hand; the factor cannot depend on
  // the branch
  double alpha = 1.5, beta = 0.5, delta = 1.25;
  Complex lam{0.7, 1.3};
  Complex z = -std::sqrt(lam * alpha * beta) * delta;
  Complex cosv = std::cos(z), sincv = std::sin(z) / z;
  FundamentalMatrix f = segment_factor(alpha, beta, delta, lam);
  CHECK(std::abs(f.c1 - cosv) < 1e-14);
  CHECK(std::abs(f.s1 - alpha * delta * sincv) < 1e-14);
  CHECK(std::abs(f.c2 + lam * beta * delta * sincv) < 1e-14);
}

TEST_CASE("tiny arguments go through the series branch") {
  FundamentalMatrix f = segment_factor(1.0, 1.0, 1e-6, Complex{1.0, 0.0});
  CHECK(f.c1.real() == Approx(std::cos(1e-6)).epsilon(1e-15));
  CHECK(f.s1.real() == Approx(std::sin(1e-6)).epsilon(1e-15));
  FundamentalMatrix z = segment_factor(1.0, 1.0, 0.5, Complex{0.0, 0.0});
  CHECK(z.c1 == Complex{1.0});
  CHECK(z.s1 == Complex{0.5});
  CHECK(z.c2 == Complex{0.0});
}

TEST_CASE("fundamental matrix ground truths") {
  oracles::Fleet fleet(32);
  IntegralSystem sys = fleet.any();

  SUBCASE("empty product at x = 0") {
    FundamentalMatrix u = fundamental_matrix(sys, 0.0, Complex{1.0, 2.0});
    CHECK(u.c1 == Complex{1.0});
    CHECK(u.s2 == Complex{1.0});
    CHECK(u.s1 == Complex{0.0});
    CHECK(u.c2 == Complex{0.0});
  }

  SUBCASE("lambda = 0 freezes the second components") {
    for (int rep = 0; rep < 10; ++rep) {
      IntegralSystem s = fleet.any();
      for (int i = 1; i <= 10; ++i) {
        double x = i * 0.5;
        FundamentalMatrix u = fundamental_matrix(s, x, Complex{0.0});
        CHECK(u.c1 == Complex{1.0});
        CHECK(u.c2 == Complex{0.0});
        CHECK(u.s2 == Complex{1.0});
        CHECK(u.s1.real() == s.r1().eval_left(x));
        CHECK(u.s1.imag() == 0.0);
      }
    }
  }
}

TEST_CASE("hand-multiplied two-factor system") {
  // dR2 atom at 0, then pure dR1 growth
  Complex lam{0.5, 1.5};
  double m0 = 2.0;
  IntegralSystem sys = lc_string(m0);
  FundamentalMatrix u = fundamental_matrix(sys, 2.0, lam);
  CHECK(std::abs(u.c1 - (1.0 - lam * m0 * 2.0)) < 1e-14);
  CHECK(std::abs(u.c2 - (-lam * m0)) < 1e-14);
  CHECK(std::abs(u.s1 - 2.0) < 1e-14);
  CHECK(std::abs(u.s2 - 1.0) < 1e-14);
}

TEST_CASE("determinant one and cocycle splitting on random systems") {
  oracles::Fleet fleet(33);
  for (int rep = 0; rep < 15; ++rep) {
    IntegralSystem sys = fleet.any();
    for (Complex lam : oracles::moderate_lambdas()) {
      double x = fleet.pick(1, 10) / 2.0;
      FundamentalMatrix u = fundamental_matrix(sys, x, lam);
      CHECK(std::abs(u.det() - 1.0) <= 1e-10 * std::max(1.0, u.max_abs() * u.max_abs()));

      double mid = fleet.uniform(0.0, x);
      FundamentalMatrix left = fundamental_matrix(sys, mid, lam);
      FundamentalMatrix rest =
          propagate_pieces(sys, lam, mid, x, FundamentalMatrix{}, NoSeg{}, NoAtom{});
      CHECK(entry_diff(rest * left, u) <= 1e-10 * std::max(1.0, u.unscaled().max_abs()));
    }
  }
}

TEST_CASE("one-sided evaluation honours the atom at the boundary") {
  IntegralSystem sys = lc_string(1.0);
  Complex lam{0.0, 1.0};
  FundamentalMatrix left = fundamental_matrix(sys, 0.0, lam);
  FundamentalMatrix right = fundamental_matrix_right(sys, 0.0, lam);
  CHECK(left.c2 == Complex{0.0});
  CHECK(std::abs(right.c2 - (-lam)) < 1e-15);
}

TEST_CASE("monodromy polynomial of a discrete string") {
  double m0 = 1.25, l1 = 0.75;
  IntegralSystem cell = IntegralSystem::validate(StieltjesMeasure({{1.0, l1}}, {}),
                                                 StieltjesMeasure({{0.0, m0}}, {}));
  PolyMatrix u = monodromy_polynomial(cell, 2.0);
  CHECK(u.c1.coeff(0) == 1.0);
  CHECK(u.c1.coeff(1) == -(l1 * m0));
  CHECK(u.s1.coeff(0) == l1);
  CHECK(u.c2.coeff(1) == -m0);
  CHECK(u.s2.coeff(0) == 1.0);
  CHECK(u.c1.degree() == 1);

  PolyMatrix empty = monodromy_polynomial(cell, 0.0);
  CHECK(empty.c1.coeff(0) == 1.0);
  CHECK(empty.s1.degree() <= 0);

  IntegralSystem with_density = IntegralSystem::validate(
      StieltjesMeasure({}, {{0.0, 1.0, 1.0}}), StieltjesMeasure({{0.5, 1.0}}, {}));
  CHECK_THROWS_AS(monodromy_polynomial(with_density, 1.0), Error);
}

TEST_CASE("monodromy coefficients agree with interpolated numeric evaluations") {
  oracles::Fleet fleet(34);
  for (int rep = 0; rep < 6; ++rep) {
    IntegralSystem sys = fleet.atomic_string(2 + rep % 3);
    double x = 2.0 * (2 + rep % 3);
    PolyMatrix pm = monodromy_polynomial(sys, x);
    int deg = std::max(std::max(pm.c1.degree(), pm.c2.degree()), 0);
    std::vector<Complex> xs, ys;
    for (int k = 0; k <= deg; ++k) {
      Complex lam{0.3 + 0.4 * k, 0.7 - 0.2 * k};
      xs.push_back(lam);
      ys.push_back(fundamental_matrix(sys, x, lam).c1);
    }
    std::vector<Complex> coeff = oracles::lagrange_coeffs(xs, ys);
    for (int k = 0; k <= deg; ++k)
      CHECK(std::abs(coeff[std::size_t(k)] - pm.c1.coeff(k)) <=
            1e-9 * std::max(1.0, std::abs(pm.c1.coeff(k))));

    // entirety proxy: the polynomial reproduces the numeric entry at a fresh point
    Complex probe{-1.1, 0.6};
    CHECK(std::abs(pm.c1.eval(probe) - fundamental_matrix(sys, x, probe).c1) <=
          1e-9 * std::max(1.0, std::abs(pm.c1.eval(probe))));
  }
}

TEST_CASE("series coefficients") {
  SUBCASE("psi_1 is R2") {
    oracles::Fleet fleet(35);
    for (int rep = 0; rep < 8; ++rep) {
      IntegralSystem sys = fleet.any();
      double x = fleet.pick(1, 8) / 2.0;
      SeriesCoefficients sc = series_coefficients(sys, x, 3);
      CHECK(sc.psi[0] == Approx(sys.r2().eval_left(x)).epsilon(1e-14));
      for (double v : sc.phi) CHECK(v >= 0.0);
      for (double v : sc.psi) CHECK(v >= 0.0);
    }
  }

  SUBCASE("phi_1 closed form for the Krein tail over one atom") {
    IntegralSystem sys = lc_string(2.0);
    SeriesCoefficients sc = series_coefficients(sys, 3.0, 2);
    CHECK(sc.phi[0] == Approx(2.0 * 3.0).epsilon(1e-14));  // int R2 dR1 = m0 x
  }

  SUBCASE("zero measure system") {
    IntegralSystem sys = IntegralSystem::unchecked(StieltjesMeasure(), StieltjesMeasure());
    SeriesCoefficients sc = series_coefficients(sys, 2.0, 4);
    for (double v : sc.phi) CHECK(v == 0.0);
    for (double v : sc.psi) CHECK(v == 0.0);
  }
}

TEST_CASE("power series consistency with polynomial monodromy") {
  oracles::Fleet fleet(36);
  for (int rep = 0; rep < 5; ++rep) {
    IntegralSystem sys = fleet.atomic_string(4);
    double x = 7.5;
    PolyMatrix pm = monodromy_polynomial(sys, x);
    SeriesCoefficients sc = series_coefficients(sys, x, 6);
    for (int k = 1; k <= 6; ++k) {
      double sign = (k % 2 == 0) ? 1.0 : -1.0;
      CHECK(pm.c1.coeff(k) == sign * sc.phi[std::size_t(k - 1)]);
      CHECK(pm.c2.coeff(k) == sign * sc.psi[std::size_t(k - 1)]);
    }
  }
}

TEST_CASE("entries nonnegative and quotients monotone for lambda < 0") {
  // s1/c1 climbs towards q from below while s2/c2 descends from above once
  // dR2 has mass; together they bracket the limit
  oracles::Fleet fleet(37);
  for (int rep = 0; rep < 10; ++rep) {
    IntegralSystem sys = fleet.any();
    double a = sys.r2().inf_support();
    for (double t : {-0.5, -2.0}) {
      double prev_lo = -1.0;
      double prev_hi = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 12; ++i) {
        double x = i * 0.5;
        FundamentalMatrix u = fundamental_matrix(sys, x, Complex{t, 0.0});
        CHECK(u.c1.real() >= 0.0);
        CHECK(u.s1.real() >= 0.0);
        CHECK(u.c2.real() >= 0.0);
        CHECK(u.s2.real() >= 0.0);
        double lo = u.s1.real() / u.c1.real();
        CHECK(lo >= prev_lo - 1e-13 * std::abs(lo));
        prev_lo = lo;
        if (x > a && u.c2.real() > 0.0) {
          double hi = u.s2.real() / u.c2.real();
          CHECK(hi <= prev_hi + 1e-13 * std::abs(hi));
          CHECK(lo <= hi);
          prev_hi = hi;
        }
      }
    }
  }
}

TEST_CASE("structural identities at lambda = mu = 0 are exact") {
  oracles::Fleet fleet(38);
  for (int rep = 0; rep < 6; ++rep) {
    IntegralSystem sys = fleet.any();
    double x = fleet.pick(1, 8) / 2.0;
    CHECK(check_wronskian(sys, x, Complex{0.0}) == 0.0);
    CHECK(check_kernel_identity(sys, x, Complex{0.0}, Complex{0.0}) == 0.0);
    CHECK(check_green(sys, x, Complex{0.0}, Complex{0.0}) <= 1e-13);
  }
}

TEST_CASE("structural identities on atomic and segment systems") {
  IntegralSystem atomic = oracles::Fleet(39).atomic_string(2);
  IdentityResiduals r1 = check_identities(atomic, 3.5, Complex{1.0, 1.0}, Complex{2.0, -3.0});
  CHECK(r1.max_residual() <= 1e-10);

  IntegralSystem seg = IntegralSystem::validate(StieltjesMeasure({}, {{0.0, 1.5, 1.0}}),
                                                StieltjesMeasure({}, {{0.0, 1.5, 2.0}}));
  IdentityResiduals r2 = check_identities(seg, 1.5, Complex{-4.0, 0.0}, Complex{-1.0, 0.0});
  CHECK(r2.max_residual() <= 1e-10);
}

TEST_CASE("propagation survives extreme spectral parameters") {
  IntegralSystem lp = IntegralSystem::validate(StieltjesMeasure({}, {}, 1.0),
                                               StieltjesMeasure({}, {}, 1.0));
  FundamentalMatrix u = fundamental_matrix(lp, 40.0, Complex{-1.0e8, 0.0});
  CHECK(u.log_scale > 0.0);  // cosh(1e4 * 40) is far beyond double range
  CHECK(std::isfinite(u.max_abs()));
  // the ratio survives the scaling: s1/c1 -> 1/sqrt(-lambda) = 1e-4
  CHECK(std::abs(u.s1 / u.c1) == Approx(1e-4).epsilon(1e-6));
}
