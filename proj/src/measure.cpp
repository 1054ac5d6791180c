#include "kw/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

StieltjesMeasure::StieltjesMeasure(std::vector<Atom> atoms, std::vector<Segment> segments,
                                   double tail_density, double b_rep)
    : atoms_(std::move(atoms)), tail_density_(tail_density) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!(a.position >= 0.0) || !std::isfinite(a.position))
      fail(Errc::InvalidMeasure, "atom position must be finite and >= 0");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      fail(Errc::InvalidMeasure, "atom mass must be finite and > 0");
    if (i > 0 && !(atoms_[i - 1].position < a.position))
      fail(Errc::InvalidMeasure, "atom positions must be distinct");
  }

  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.start < b.start; });
  for (const Segment& s : segments) {
    if (!(s.start >= 0.0) || !(s.end > s.start) || !std::isfinite(s.end))
      fail(Errc::InvalidMeasure, "segment must satisfy 0 <= start < end < inf");
    if (!(s.density >= 0.0) || !std::isfinite(s.density))
      fail(Errc::InvalidMeasure, "segment density must be finite and >= 0");
    if (!segments_.empty() && s.start < segments_.back().end)
      fail(Errc::InvalidMeasure, "segments must not overlap");
    if (s.density > 0.0) segments_.push_back(s);  // zero-density stretches carry no mass
  }

  if (!(tail_density_ >= 0.0) || !std::isfinite(tail_density_))
    fail(Errc::InvalidMeasure, "tail density must be finite and >= 0");

  double natural = 0.0;
  if (!atoms_.empty()) natural = std::max(natural, atoms_.back().position);
  if (!segments_.empty()) natural = std::max(natural, segments_.back().end);
  if (b_rep < 0.0) {
    b_rep_ = natural;
  } else {
    if (b_rep < natural) fail(Errc::InvalidMeasure, "b_rep lies inside the described support");
    b_rep_ = b_rep;
  }
}

bool StieltjesMeasure::is_zero() const {
  return atoms_.empty() && segments_.empty() && tail_density_ == 0.0;
}

double StieltjesMeasure::total_variation() const {
  if (infinite()) return kInf;
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass;
  for (const Segment& s : segments_) total += s.density * s.length();
  return total;
}

double StieltjesMeasure::eval_left(double x) const {
  double r = 0.0;
  for (const Atom& a : atoms_) {
    if (a.position < x) r += a.mass;
    else break;
  }
  for (const Segment& s : segments_) {
    if (s.start >= x) break;
    r += s.density * (std::min(s.end, x) - s.start);
  }
  if (tail_density_ > 0.0 && x > b_rep_) r += tail_density_ * (x - b_rep_);
  return r;
}

double StieltjesMeasure::eval_right(double x) const { return eval_left(x) + mass_at(x); }

double StieltjesMeasure::mass_at(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.position < v; });
  if (it != atoms_.end() && it->position == x) return it->mass;
  return 0.0;
}

double StieltjesMeasure::density_at(double x) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double v, const Segment& s) { return v < s.start; });
  if (it != segments_.begin()) {
    const Segment& s = *(it - 1);
    if (x < s.end) return s.density;
  }
  if (tail_density_ > 0.0 && x >= b_rep_) return tail_density_;
  return 0.0;
}

double StieltjesMeasure::inf_support() const {
  double a = kInf;
  if (!atoms_.empty()) a = atoms_.front().position;
  if (!segments_.empty()) a = std::min(a, segments_.front().start);
  if (tail_density_ > 0.0) a = std::min(a, b_rep_);
  if (a == kInf) fail(Errc::ZeroMeasure, "inf_support of the zero measure");
  return a;
}

double StieltjesMeasure::sup_support() const {
  if (tail_density_ > 0.0) return kInf;
  double b = 0.0;
  if (!atoms_.empty()) b = atoms_.back().position;
  if (!segments_.empty()) b = std::max(b, segments_.back().end);
  return b;
}

void StieltjesMeasure::add_breakpoints(double from, double to, std::vector<double>& out) const {
  for (const Atom& a : atoms_)
    if (a.position >= from && a.position < to) out.push_back(a.position);
  for (const Segment& s : segments_) {
    double lo = std::max(s.start, from), hi = std::min(s.end, to);
    if (lo >= hi) continue;
    if (lo > from) out.push_back(lo);
    if (hi < to) out.push_back(hi);
  }
  if (tail_density_ > 0.0 && b_rep_ > from && b_rep_ < to) out.push_back(b_rep_);
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Poly Poly::constant(double c) { return Poly(std::vector<double>{c}); }

Poly Poly::linear(double c0, double c1) { return Poly(std::vector<double>{c0, c1}); }

double Poly::coeff(int k) const {
  return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[std::size_t(k)] : 0.0;
}

double Poly::eval(double x) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

std::complex<double> Poly::eval(std::complex<double> x) const {
  std::complex<double> v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

Poly Poly::antiderivative() const {
  std::vector<double> c(coeffs_.size() + 1, 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k + 1] = coeffs_[k] / double(k + 1);
  return Poly(std::move(c));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return Poly();
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Poly(std::move(c));
}

Poly Poly::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= factor;
  return Poly(std::move(c));
}

// ---------------------------------------------------------------------------
// PiecewisePoly

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Poly> pieces,
                             double start_value)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)), start_value_(start_value) {
  if (breaks_.size() != pieces_.size() + 1 || pieces_.empty())
    fail(Errc::InvalidMeasure, "piecewise polynomial needs n pieces and n+1 breakpoints");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1]))
      fail(Errc::InvalidMeasure, "piecewise breakpoints must increase");
}

PiecewisePoly PiecewisePoly::constant(double value, double end) {
  return PiecewisePoly({0.0, end}, {Poly::constant(value)}, value);
}

const Poly& PiecewisePoly::piece_at(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t i = (it == breaks_.begin()) ? 0 : std::size_t(it - breaks_.begin()) - 1;
  if (i >= pieces_.size()) i = pieces_.size() - 1;
  return pieces_[i];
}

double PiecewisePoly::eval(double x) const { return piece_at(x).eval(x); }

double PiecewisePoly::eval_left(double x) const {
  if (x <= breaks_.front()) return start_value_;
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  if (it != breaks_.end() && *it == x && it != breaks_.begin()) {
    std::size_t i = std::size_t(it - breaks_.begin()) - 1;
    if (i >= pieces_.size()) i = pieces_.size() - 1;
    return pieces_[i].eval(x);
  }
  return eval(x);
}

PiecewisePoly product(const PiecewisePoly& f, const PiecewisePoly& g) {
  std::vector<double> breaks;
  breaks.reserve(f.breaks_.size() + g.breaks_.size());
  breaks.insert(breaks.end(), f.breaks_.begin(), f.breaks_.end());
  breaks.insert(breaks.end(), g.breaks_.begin(), g.breaks_.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<Poly> pieces;
  pieces.reserve(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double mid = breaks[i] + (breaks[i + 1] - breaks[i]) / 2;
    pieces.push_back(f.piece_at(mid) * g.piece_at(mid));
  }
  return PiecewisePoly(std::move(breaks), std::move(pieces),
                       f.start_value_ * g.start_value_);
}

// ---------------------------------------------------------------------------
// Profiles and exact Stieltjes integration

PiecewisePoly cdf_profile(const StieltjesMeasure& m, double end) {
  std::vector<double> breaks{0.0, end};
  m.add_breakpoints(0.0, end, breaks);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<Poly> pieces;
  pieces.reserve(breaks.size() - 1);
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i];
    v += m.mass_at(a);
    double d = m.density_at(a + (breaks[i + 1] - a) / 2);
    // v + d*(t - a), expanded in t
    pieces.push_back(Poly({v - d * a, d}));
    v += d * (breaks[i + 1] - a);
  }
  return PiecewisePoly(std::move(breaks), std::move(pieces), 0.0);
}

namespace {

const Poly& owning_piece(const PiecewisePoly& f, double x) {
  const std::vector<double>& br = f.breaks();
  auto it = std::upper_bound(br.begin(), br.end(), x);
  std::size_t idx = (it == br.begin()) ? 0 : std::size_t(it - br.begin()) - 1;
  if (idx >= f.pieces().size()) idx = f.pieces().size() - 1;
  return f.pieces()[idx];
}

// \int_[lo,hi) f * dens dt, exact per polynomial piece of f.
double density_integral(const PiecewisePoly& f, double lo, double hi, double dens) {
  if (dens == 0.0 || hi <= lo) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double t : f.breaks())
    if (t > lo && t < hi) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    Poly F = owning_piece(f, a + (b - a) / 2).antiderivative();
    total += dens * (F.eval(b) - F.eval(a));
  }
  return total;
}

}  // namespace

double integrate(const PiecewisePoly& f, const StieltjesMeasure& m, double x, AtomSide side) {
  double total = 0.0;
  for (const Atom& a : m.atoms()) {
    if (a.position >= x) break;
    total += f.eval(a.position, side) * a.mass;
  }
  for (const Segment& s : m.segments())
    total += density_integral(f, std::max(s.start, 0.0), std::min(s.end, x), s.density);
  if (m.tail_density() > 0.0 && x > m.b_rep())
    total += density_integral(f, m.b_rep(), x, m.tail_density());
  return total;
}

PiecewisePoly integrate_profile(const PiecewisePoly& f, const StieltjesMeasure& m, double end,
                                AtomSide side) {
  std::vector<double> breaks{0.0, end};
  m.add_breakpoints(0.0, end, breaks);
  for (double t : f.breaks())
    if (t > 0.0 && t < end) breaks.push_back(t);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<Poly> pieces;
  pieces.reserve(breaks.size() - 1);
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1];
    double mass = m.mass_at(a);
    if (mass > 0.0) v += f.eval(a, side) * mass;
    double mid = a + (b - a) / 2;
    double dens = m.density_at(mid);
    if (dens == 0.0) {
      pieces.push_back(Poly::constant(v));
    } else {
      Poly F = owning_piece(f, mid).antiderivative().scaled(dens);
      // v + dens * (F(t) - F(a))
      pieces.push_back(Poly::constant(v - F.eval(a)) + F);
      v += F.eval(b) - F.eval(a);
    }
  }
  return PiecewisePoly(std::move(breaks), std::move(pieces), 0.0);
}

L2Verdict l2_membership(const StieltjesMeasure& weight) {
  if (weight.infinite()) return {false, 0.0};
  return {true, weight.total_variation()};
}

L2Verdict l2_membership(const StieltjesMeasure& weight, const StieltjesMeasure& profile) {
  double reach = std::max(weight.b_rep(), profile.b_rep()) + 1.0;
  if (!weight.atoms().empty())
    reach = std::max(reach, weight.atoms().back().position + 1.0);
  PiecewisePoly f = cdf_profile(profile, reach);
  if (weight.infinite()) {
    // with f non-decreasing, any eventual growth or positive level meets the
    // tail's infinite mass
    bool f_vanishes = profile.is_zero();
    if (!f_vanishes) return {false, 0.0};
  }
  PiecewisePoly f2 = product(f, f);
  return {true, integrate(f2, weight, reach, AtomSide::Left)};
}

}  // namespace kw
