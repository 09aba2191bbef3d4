#pragma once

// JSON file formats and report records.
//
// Group file:
//   {"ell": 2, "level": 2, "kind": "linear",
//    "generators": [[[1,1],[0,1]], ...]}
// affine generators are {"matrix": [[a,b],[c,d]], "translation": [x,y]}.
//
// Curve file:
//   {"a": [a1,a2,a3,a4,a6], "point": [x,y]}
// entries are integers or "p/q" strings.

#include <gmpxx.h>
#include <json.hpp>

#include <string>

#include "arbor/arboreal.hpp"
#include "arbor/cohomology.hpp"
#include "arbor/density.hpp"
#include "arbor/ecq/curve.hpp"
#include "arbor/ecq/division.hpp"
#include "arbor/ecq/scan.hpp"
#include "arbor/errors.hpp"
#include "arbor/sdgroup.hpp"

namespace arbor {

using json = nlohmann::json;

/// Input error with a JSON-pointer (or byte offset) location.
class ParseError : public InputError {
 public:
  ParseError(const std::string& location, const std::string& what)
      : InputError(location + ": " + what), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

json read_json_file(const std::string& path);

SubgroupSpec parse_group(const json& j);
SubgroupSpec load_group_file(const std::string& path);
json group_to_json(const SubgroupSpec& spec);

struct CurveInput {
  ecq::CurveQ curve;
  ecq::PointQ point;
};
CurveInput parse_curve(const json& j);
CurveInput load_curve_file(const std::string& path);
json curve_to_json(const ecq::CurveQ& E, const ecq::PointQ& P);

/// Integer or "p/q" string.
mpq_class parse_rational(const json& j, const std::string& where);
/// "num/den" in lowest terms, always with a denominator.
std::string rational_string(const mpq_class& q);
/// {"exact": "num/den", "decimal": approx}; only "exact" is read back.
json rational_json(const mpq_class& q);
mpq_class rational_from_json(const json& j, const std::string& where);

void to_json(json& j, const BoundReport& r);
void from_json(const json& j, BoundReport& r);
void to_json(json& j, const H1Result& r);
void from_json(const json& j, H1Result& r);
void to_json(json& j, const H1Tower& t);
void from_json(const json& j, H1Tower& t);
void to_json(json& j, const FixFractionReport& r);
void from_json(const json& j, FixFractionReport& r);

namespace ecq {
void to_json(json& j, const PointQ& P);
void from_json(const json& j, PointQ& P);
void to_json(json& j, const ScanResult& r);
void from_json(const json& j, ScanResult& r);
void to_json(json& j, const DivisionReport& r);
void from_json(const json& j, DivisionReport& r);
}  // namespace ecq

}  // namespace arbor
