#pragma once

#include <string>

#include "kw/measure.hpp"

namespace kw {

// On-disk description of a system: two measures plus free-form metadata.
// Parsed pairs still go through IntegralSystem::validate before use.
struct SystemSpec {
  std::string name;
  std::string notes;
  StieltjesMeasure r1;
  StieltjesMeasure r2;
};

// Errc::ParseError for malformed text or wrong shapes; measure-invariant
// violations surface as Errc::InvalidMeasure.
SystemSpec parse_system_spec(const std::string& json_text);
SystemSpec load_system_spec(const std::string& path);  // Errc::IoError if unreadable

// Canonical form: fixed key order, full field set, round-trip-exact numbers.
std::string canonical_spec_json(const SystemSpec& spec);
void save_system_spec(const SystemSpec& spec, const std::string& path);

}  // namespace kw
