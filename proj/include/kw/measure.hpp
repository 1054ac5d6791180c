#pragma once

#include <complex>
#include <vector>

#include "kw/errors.hpp"

namespace kw {

// One jump of a Stieltjes measure: R gains `mass` when x crosses `position`.
struct Atom {
  double position = 0.0;
  double mass = 0.0;
  bool operator==(const Atom&) const = default;
};

// Constant density on [start, end).
struct Segment {
  double start = 0.0;
  double end = 0.0;
  double density = 0.0;
  double length() const { return end - start; }
  bool operator==(const Segment&) const = default;
};

// Non-decreasing left-continuous R on [0, inf) with R(0) = 0, described by
// finitely many atoms, piecewise-constant densities and an optional constant
// tail density on [b_rep, inf). Integrals with upper limit x are over [0, x),
// so R itself is the left-continuous evaluation and R_+ the right-continuous
// one. The measure is finite iff tail_density == 0.
//
// Values are immutable after construction; all operations are const.
class StieltjesMeasure {
 public:
  StieltjesMeasure() = default;
  StieltjesMeasure(std::vector<Atom> atoms, std::vector<Segment> segments,
                   double tail_density = 0.0, double b_rep = -1.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Segment>& segments() const { return segments_; }
  double tail_density() const { return tail_density_; }
  double b_rep() const { return b_rep_; }

  bool infinite() const { return tail_density_ > 0.0; }
  bool is_zero() const;
  // R(b); +infinity when a tail is present, otherwise the full finite mass
  // (an atom sitting exactly at b_rep counts).
  double total_variation() const;

  double eval_left(double x) const;   // R(x)  = dR([0, x))
  double eval_right(double x) const;  // R+(x) = dR([0, x])
  double mass_at(double x) const;     // atom mass at x, 0 if none
  double density_at(double x) const;  // segment or tail density at x

  double inf_support() const;  // Errc::ZeroMeasure on the zero measure
  // Right end of the finite support part; +infinity when a tail is present.
  double sup_support() const;

  // Append atom positions in [from, to) and clipped segment/tail boundary
  // points in (from, to) to `out` (unsorted, possibly duplicated).
  void add_breakpoints(double from, double to, std::vector<double>& out) const;

  bool operator==(const StieltjesMeasure&) const = default;

 private:
  std::vector<Atom> atoms_;        // strictly increasing positions, mass > 0
  std::vector<Segment> segments_;  // sorted, disjoint, density > 0
  double tail_density_ = 0.0;      // constant density on [b_rep_, inf)
  double b_rep_ = 0.0;             // right end of the finitely-described part
};

// Dense real polynomial, coefficients in ascending degree order.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> coeffs);
  static Poly constant(double c);
  static Poly linear(double c0, double c1);  // c0 + c1*t

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(int k) const;  // 0 beyond the stored degree

  double eval(double x) const;
  std::complex<double> eval(std::complex<double> x) const;
  Poly antiderivative() const;  // constant term 0

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(double factor) const;

 private:
  std::vector<double> coeffs_;  // empty == zero polynomial
};

enum class AtomSide { Left, Right };

// Piecewise polynomial on [0, end): pieces_[i] applies on
// [breaks_[i], breaks_[i+1]). Functions of bounded variation built from
// measures jump at breakpoints; eval() takes the right-continuous value,
// eval_left() the left-continuous one. start_value is the function value at
// breaks_.front() itself (a CDF jumps immediately past 0 when an atom sits
// there, yet R(0) = 0).
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(std::vector<double> breaks, std::vector<Poly> pieces, double start_value);
  static PiecewisePoly constant(double value, double end);

  double start() const { return breaks_.front(); }
  double end() const { return breaks_.back(); }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<Poly>& pieces() const { return pieces_; }

  double eval(double x) const;
  double eval_left(double x) const;
  double eval(double x, AtomSide side) const {
    return side == AtomSide::Left ? eval_left(x) : eval(x);
  }

  friend PiecewisePoly product(const PiecewisePoly& f, const PiecewisePoly& g);

 private:
  const Poly& piece_at(double x) const;
  std::vector<double> breaks_;  // strictly increasing, size = pieces + 1
  std::vector<Poly> pieces_;
  double start_value_ = 0.0;
};

// Profile of R as a piecewise polynomial on [0, end), left value 0 at 0.
PiecewisePoly cdf_profile(const StieltjesMeasure& m, double end);

// Exact \int_{[0,x)} f dm for piecewise-polynomial f: atoms contribute
// f(p) * mass with f evaluated on the requested side, densities contribute
// closed-form antiderivatives.
double integrate(const PiecewisePoly& f, const StieltjesMeasure& m, double x,
                 AtomSide side = AtomSide::Left);

// Indefinite version: F(t) = \int_{[0,t)} f dm as a profile on [0, end).
PiecewisePoly integrate_profile(const PiecewisePoly& f, const StieltjesMeasure& m,
                                double end, AtomSide side = AtomSide::Left);

struct L2Verdict {
  bool finite = false;
  double value = 0.0;  // meaningful only when finite
};

// Membership of the constant 1 in L^2(weight).
L2Verdict l2_membership(const StieltjesMeasure& weight);
// Membership of the CDF of `profile` in L^2(weight).
L2Verdict l2_membership(const StieltjesMeasure& weight, const StieltjesMeasure& profile);

}  // namespace kw
