#pragma once

#include "kw/measure.hpp"

namespace kw {

enum class Regularity { Regular, Singular };
enum class EndpointType { LimitPoint, LimitCircle };

struct Classification {
  Regularity regularity = Regularity::Regular;
  EndpointType endpoint_type = EndpointType::LimitCircle;
  L2Verdict one_in_l2;  // 1 in L^2(R2)
  L2Verdict r1_in_l2;   // R1 in L^2(R2)
  bool regular() const { return regularity == Regularity::Regular; }
  bool limit_circle() const { return endpoint_type == EndpointType::LimitCircle; }
};

// A validated pair (R1, R2) on [0, b). Validation enforces the two standing
// assumptions: no shared atom position, and R1 separates the support of dR2
// (two growth points of dR2 with different R1 values, or growth of R1 at or
// beyond the support). Immutable after construction.
class IntegralSystem {
 public:
  // Errc::CommonAtom / Errc::Indefinite on failure.
  static IntegralSystem validate(StieltjesMeasure r1, StieltjesMeasure r2);
  // Skips the definiteness check; the fundamental matrix exists regardless.
  // Used for diagnostic propagation of swapped pairs.
  static IntegralSystem unchecked(StieltjesMeasure r1, StieltjesMeasure r2);

  const StieltjesMeasure& r1() const { return r1_; }
  const StieltjesMeasure& r2() const { return r2_; }

  // b: +infinity when either measure carries a tail.
  double endpoint() const;
  // Right end of the finitely-described content, max of the two b_rep's.
  double finite_end() const;

 private:
  IntegralSystem(StieltjesMeasure r1, StieltjesMeasure r2)
      : r1_(std::move(r1)), r2_(std::move(r2)) {}
  StieltjesMeasure r1_;
  StieltjesMeasure r2_;
};

Classification classify(const IntegralSystem& sys);

// Freeze R1 at b and let R2 grow with unit density past b. The result is
// singular limit-point and keeps the principal Titchmarsh-Weyl coefficient.
// Errc::NotRegular on singular input.
IntegralSystem canonical_continuation(const IntegralSystem& sys);

// Swap the roles of R1 and R2; regular systems are continued first. The
// swapped pair is re-validated, so Errc::Indefinite can propagate.
IntegralSystem dual(const IntegralSystem& sys);

}  // namespace kw
