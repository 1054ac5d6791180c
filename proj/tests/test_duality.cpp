#include "doctest.h"

#include <cmath>
#include <complex>

#include "kw/duality.hpp"
#include "oracles.hpp"

using namespace kw;
using doctest::Approx;

namespace {

IntegralSystem lc_string(double m0) {
  return IntegralSystem::validate(StieltjesMeasure({}, {}, 1.0),
                                  StieltjesMeasure({{0.0, m0}}, {}));
}

IntegralSystem lebesgue_system() {
  return IntegralSystem::validate(StieltjesMeasure({}, {}, 1.0),
                                  StieltjesMeasure({}, {}, 1.0));
}

}  // namespace

TEST_CASE("fundamental matrix conjugation") {
  SUBCASE("trivial at x = 0") {
    CHECK(check_fundamental_conjugation(lebesgue_system(), 0.0, Complex{1.0, 0.0}) == 0.0);
  }

  SUBCASE("explicit solution correspondence on the limit-circle string") {
    IntegralSystem sys = lc_string(2.0);
    Complex lam{1.0, 1.0};
    CHECK(check_fundamental_conjugation(sys, 2.0, lam) <= 1e-12);

    // dual solutions, entry by entry: ch = (s2, -lambda s1), sh = (-c2/lambda, c1)
    IntegralSystem swapped = IntegralSystem::unchecked(sys.r2(), sys.r1());
    for (double x : {0.5, 1.0, 2.0, 3.5}) {
      FundamentalMatrix u = fundamental_matrix(sys, x, lam).unscaled();
      FundamentalMatrix v = fundamental_matrix(swapped, x, lam).unscaled();
      CHECK(std::abs(v.c1 - u.s2) <= 1e-10);
      CHECK(std::abs(v.c2 - (-lam * u.s1)) <= 1e-10);
      CHECK(std::abs(v.s1 - (-u.c2 / lam)) <= 1e-10);
      CHECK(std::abs(v.s2 - u.c1) <= 1e-10);
    }
  }

  SUBCASE("exact on atomic systems") {
    oracles::Fleet fleet(51);
    IntegralSystem sys = fleet.atomic_string(3);
    CHECK(check_fundamental_conjugation(sys, 5.5, Complex{2.0, -1.0}) <= 1e-14);
  }

  SUBCASE("lambda = 0 is excluded") {
    CHECK_THROWS_AS(check_fundamental_conjugation(lebesgue_system(), 1.0, Complex{0.0}), Error);
  }
}

TEST_CASE("duality identity on closed-form systems") {
  SUBCASE("self-dual Lebesgue system forces q^2 = -1/lambda") {
    IntegralSystem sys = lebesgue_system();
    for (Complex lam : {Complex{0.0, 1.0}, Complex{1.0, 1.0}, Complex{-2.0, 0.0}}) {
      DualityReport rep = check_duality_identity(sys, lam, 1e-9);
      CHECK(rep.identity_residual <= rep.residual_bound);
      CHECK(std::abs(rep.q.value * rep.q.value + 1.0 / lam) <= 4.0 * 1e-9);
      CHECK(rep.conjugation_residual <= 1e-12);
    }
  }

  SUBCASE("limit-circle string against its explicit dual") {
    double m0 = 2.0;
    IntegralSystem sys = lc_string(m0);
    for (Complex lam : {Complex{0.0, 1.0}, Complex{-1.0, 0.0}}) {
      DualityReport rep = check_duality_identity(sys, lam, 1e-10);
      CHECK(rep.q.regime == QRegime::LimitCircleClosedForm);
      CHECK(rep.q_dual.regime == QRegime::LimitPointNested);
      CHECK(std::abs(rep.q.value - (-1.0 / (lam * m0))) <= 1e-12);
      CHECK(std::abs(rep.q_dual.value - m0) <= rep.q_dual.error_radius + 1e-10);
      CHECK(rep.identity_residual <= rep.residual_bound);
    }
  }

  SUBCASE("positivity bookkeeping at negative lambda") {
    oracles::Fleet fleet(52);
    for (int rep = 0; rep < 6; ++rep) {
      IntegralSystem sys = fleet.any();
      DualityReport r = [&]() {
        try {
          return check_duality_identity(sys, Complex{-1.5, 0.0}, 1e-9);
        } catch (const Error& e) {
          if (e.code() == Errc::Indefinite) return DualityReport{};  // dual may be degenerate
          throw;
        }
      }();
      if (r.lambda == Complex{0.0}) continue;
      CHECK(r.q.value.real() > 0.0);
      CHECK(r.q_dual.value.real() > 0.0);
    }
  }

  SUBCASE("lambda = 0 is excluded") {
    CHECK_THROWS_AS(check_duality_identity(lebesgue_system(), Complex{0.0}, 1e-8), Error);
  }
}

TEST_CASE("duality is symmetric under swapping the roles") {
  IntegralSystem sys = lc_string(1.5);
  Complex lam{0.5, 1.0};
  DualityReport forward = check_duality_identity(sys, lam, 1e-10);
  DualityReport backward = check_duality_identity(dual(sys), lam, 1e-10);
  // |q_hat + 1/(lambda q)| = |q_hat| / (|lambda| |q|) * |lambda q + 1/q_hat|...
  // both reports must accept, and the coefficients swap places
  CHECK(forward.pass());
  CHECK(backward.pass());
  CHECK(std::abs(forward.q.value - backward.q_dual.value) <=
        forward.q.error_radius + backward.q_dual.error_radius + 1e-9);
  CHECK(std::abs(forward.q_dual.value - backward.q.value) <=
        forward.q_dual.error_radius + backward.q.error_radius + 1e-9);
}

TEST_CASE("regular branch: dual q equals -c1(b)/(lambda s1(b))") {
  oracles::Fleet fleet(53);
  for (int rep = 0; rep < 8; ++rep) {
    IntegralSystem sys = fleet.regular();
    for (Complex lam : {Complex{0.0, 1.0}, Complex{-2.0, 0.0}}) {
      DualityReport r = check_duality_identity(sys, lam, 1e-10, 400);
      CHECK(r.regular_branch_residual <= r.q_dual.error_radius + 1e-9);
      CHECK(r.identity_residual <= r.residual_bound);
      // the continued dual is limit-circle, so its q is exact
      CHECK(r.q_dual.regime == QRegime::LimitCircleClosedForm);
      CHECK(r.q_dual.error_radius == 0.0);
    }
  }
}

TEST_CASE("mixed random fleet passes the identity") {
  oracles::Fleet fleet(54);
  int checked = 0;
  for (int rep = 0; rep < 12; ++rep) {
    IntegralSystem sys = fleet.any();
    for (Complex lam : {Complex{0.0, 1.0}, Complex{1.0, 1.0}, Complex{-2.0, 0.0}}) {
      try {
        DualityReport r = check_duality_identity(sys, lam, 1e-9, 400);
        CHECK(r.identity_residual <= r.residual_bound);
        CHECK(r.conjugation_residual <= 1e-10);
        ++checked;
      } catch (const Error& e) {
        if (e.code() != Errc::Indefinite) throw;  // indefinite duals are skipped
      }
    }
  }
  CHECK(checked >= 20);
}
