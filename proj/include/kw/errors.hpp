#pragma once

#include <stdexcept>
#include <string>

namespace kw {

// Structured failure codes. The CLI maps these onto its exit-code contract
// (parse -> 2, validation -> 3, I/O -> 4), everything else is reported as-is.
enum class Errc {
  InvalidMeasure,         // measure description violates its invariants
  ZeroMeasure,            // operation needs a measure with positive mass
  CommonAtom,             // r1 and r2 share a point of discontinuity
  Indefinite,             // {1, R1} do not separate the support of dR2
  NotRegular,             // operation requires a regular system
  NotSingular,            // operation requires a singular system
  NonAtomicRegion,        // polynomial monodromy over a region with densities
  ImaginaryPartRequired,  // Weyl discs live off the real axis
  DivisionDegenerate,     // vanishing denominator in a Moebius quotient
  ToleranceUnreachable,   // truncation schedule exhausted its budget
  InfiniteR2Total,        // zero-limit probe needs R2(b) < infinity
  ExcludedPoint,          // spectral parameter outside the admissible set
  ParseError,             // malformed system-spec file
  IoError,                // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace kw
