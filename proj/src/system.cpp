#include "kw/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace kw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Points where the value of R1 decides definiteness: the support landmarks of
// dR2 plus probes past everything, so growth of R1 at or beyond the support
// counts.
std::vector<double> definiteness_probes(const StieltjesMeasure& r1, const StieltjesMeasure& r2) {
  std::vector<double> pts;
  for (const Atom& a : r2.atoms()) pts.push_back(a.position);
  for (const Segment& s : r2.segments()) {
    pts.push_back(s.start);
    pts.push_back(s.start + s.length() / 2);
    pts.push_back(s.end);
  }
  if (r2.infinite()) pts.push_back(r2.b_rep());
  if (!pts.empty()) {
    double reach = std::max(r1.b_rep(), r2.b_rep());
    pts.push_back(reach + 1.0);
    pts.push_back(reach + 2.0);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

IntegralSystem IntegralSystem::validate(StieltjesMeasure r1, StieltjesMeasure r2) {
  // shared discontinuities
  {
    auto i1 = r1.atoms().begin();
    auto i2 = r2.atoms().begin();
    while (i1 != r1.atoms().end() && i2 != r2.atoms().end()) {
      if (i1->position == i2->position) {
        std::ostringstream os;
        os << "common atom of dR1 and dR2 at x = " << i1->position;
        fail(Errc::CommonAtom, os.str());
      }
      if (i1->position < i2->position) ++i1;
      else ++i2;
    }
  }

  // definiteness: R1 must take two different values over the support of dR2
  // (probes past the support let growth after the last mass count)
  std::vector<double> probes = definiteness_probes(r1, r2);
  if (probes.empty()) fail(Errc::Indefinite, "dR2 is the zero measure");
  double lo = kInf, hi = -kInf;
  for (double p : probes) {
    double v = r1.eval_left(p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi - lo > 1e-12 * (1.0 + std::abs(hi))))
    fail(Errc::Indefinite, "R1 is constant across the support of dR2");

  return IntegralSystem(std::move(r1), std::move(r2));
}

IntegralSystem IntegralSystem::unchecked(StieltjesMeasure r1, StieltjesMeasure r2) {
  return IntegralSystem(std::move(r1), std::move(r2));
}

double IntegralSystem::endpoint() const {
  if (r1_.infinite() || r2_.infinite()) return kInf;
  return finite_end();
}

double IntegralSystem::finite_end() const { return std::max(r1_.b_rep(), r2_.b_rep()); }

Classification classify(const IntegralSystem& sys) {
  Classification c;
  bool finite_totals = !sys.r1().infinite() && !sys.r2().infinite();
  c.regularity = finite_totals ? Regularity::Regular : Regularity::Singular;
  c.one_in_l2 = l2_membership(sys.r2());
  c.r1_in_l2 = l2_membership(sys.r2(), sys.r1());
  c.endpoint_type = (c.one_in_l2.finite && c.r1_in_l2.finite) ? EndpointType::LimitCircle
                                                              : EndpointType::LimitPoint;
  return c;
}

IntegralSystem canonical_continuation(const IntegralSystem& sys) {
  if (!classify(sys).regular())
    fail(Errc::NotRegular, "canonical continuation is defined for regular systems");
  double b = sys.finite_end();
  StieltjesMeasure r2_ext(sys.r2().atoms(), sys.r2().segments(), 1.0, b);
  return IntegralSystem::validate(sys.r1(), std::move(r2_ext));
}

IntegralSystem dual(const IntegralSystem& sys) {
  if (classify(sys).regular()) {
    IntegralSystem cont = canonical_continuation(sys);
    return IntegralSystem::validate(cont.r2(), cont.r1());
  }
  return IntegralSystem::validate(sys.r2(), sys.r1());
}

}  // namespace kw
