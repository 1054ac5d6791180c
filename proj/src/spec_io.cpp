#include "kw/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kw {

namespace {

using json = nlohmann::ordered_json;

StieltjesMeasure measure_from_json(const json& j, const std::string& key) {
  if (!j.is_object()) fail(Errc::ParseError, "measure '" + key + "' must be an object");
  std::vector<Atom> atoms;
  std::vector<Segment> segments;
  double tail = 0.0;
  double b_rep = -1.0;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2)
        fail(Errc::ParseError, "atoms of '" + key + "' must be [position, mass] pairs");
      atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    }
  }
  if (j.contains("segments")) {
    for (const auto& s : j.at("segments")) {
      if (!s.is_array() || s.size() != 3)
        fail(Errc::ParseError, "segments of '" + key + "' must be [start, end, density]");
      segments.push_back({s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()});
    }
  }
  if (j.contains("tail_density")) tail = j.at("tail_density").get<double>();
  if (j.contains("b_rep")) b_rep = j.at("b_rep").get<double>();
  return StieltjesMeasure(std::move(atoms), std::move(segments), tail, b_rep);
}

json measure_to_json(const StieltjesMeasure& m) {
  json j = json::object();
  json atoms = json::array();
  for (const Atom& a : m.atoms()) atoms.push_back({a.position, a.mass});
  json segments = json::array();
  for (const Segment& s : m.segments()) segments.push_back({s.start, s.end, s.density});
  j["atoms"] = std::move(atoms);
  j["segments"] = std::move(segments);
  j["tail_density"] = m.tail_density();
  j["b_rep"] = m.b_rep();
  return j;
}

}  // namespace

SystemSpec parse_system_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(Errc::ParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::ParseError, "system spec must be a JSON object");
  if (!j.contains("r1") || !j.contains("r2"))
    fail(Errc::ParseError, "system spec needs 'r1' and 'r2' measures");
  SystemSpec spec;
  try {
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    if (j.contains("notes")) spec.notes = j.at("notes").get<std::string>();
    spec.r1 = measure_from_json(j.at("r1"), "r1");
    spec.r2 = measure_from_json(j.at("r2"), "r2");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::ParseError, std::string("malformed system spec: ") + e.what());
  }
  return spec;
}

SystemSpec load_system_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(Errc::IoError, "read failure on '" + path + "'");
  return parse_system_spec(buf.str());
}

std::string canonical_spec_json(const SystemSpec& spec) {
  json j = json::object();
  j["name"] = spec.name;
  j["notes"] = spec.notes;
  j["r1"] = measure_to_json(spec.r1);
  j["r2"] = measure_to_json(spec.r2);
  return j.dump(2) + "\n";
}

void save_system_spec(const SystemSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::IoError, "cannot open '" + path + "' for writing");
  out << canonical_spec_json(spec);
  if (!out) fail(Errc::IoError, "write failure on '" + path + "'");
}

}  // namespace kw
