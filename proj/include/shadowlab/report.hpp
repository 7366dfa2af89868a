#pragma once

// Scenario reports: labelled checks with expected/actual values and a
// provenance tag, emitted as canonical JSON or CSV.

#include <map>
#include <string>
#include <vector>

#include "shadowlab/serialization.hpp"

namespace shadowlab {

enum class Status { pass, fail, undetermined };
std::string status_name(Status s);

/// published: the constant or verdict appears in the source text; derived:
/// computed by an independent oracle; trivial: follows from the definitions.
enum class Provenance { published, derived, trivial };
std::string provenance_name(Provenance p);

struct Check {
  std::string label;
  std::string expected;
  std::string actual;
  Provenance provenance = Provenance::derived;
  Status status = Status::fail;
};

struct Report {
  std::string name;
  std::map<std::string, std::string> params;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;
  Json details = Json::object();

  /// fail if any check failed, else undetermined if any is, else pass.
  Status status() const;
  /// Adds a check whose status is expected == actual.
  Check& expect(std::string label, std::string expected, std::string actual, Provenance p);
  Check& add(std::string label, std::string expected, std::string actual, Provenance p, Status s);
};

enum class Format { json, csv };
Format format_from_string(const std::string& s);

Json report_to_json(const Report& r);
/// Inverse of report_to_json; the status is recomputed from the checks.
Report report_from_json(const Json& j);
std::string report_to_csv(const Report& r);
std::string render(const Report& r, Format f);
/// Writes render(r, f) to path; throws io on failure.
void emit(const Report& r, Format f, const std::string& path);

}  // namespace shadowlab
