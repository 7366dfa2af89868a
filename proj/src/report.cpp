#include "shadowlab/report.hpp"

#include <fstream>

namespace shadowlab {

std::string status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::undetermined: return "undetermined";
  }
  return "?";
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::published: return "published";
    case Provenance::derived: return "derived";
    case Provenance::trivial: return "trivial";
  }
  return "?";
}

Status Report::status() const {
  bool undetermined = false;
  for (const auto& c : checks) {
    if (c.status == Status::fail) return Status::fail;
    if (c.status == Status::undetermined) undetermined = true;
  }
  return undetermined ? Status::undetermined : Status::pass;
}

Check& Report::expect(std::string label, std::string expected, std::string actual, Provenance p) {
  Status s = expected == actual ? Status::pass : Status::fail;
  return add(std::move(label), std::move(expected), std::move(actual), p, s);
}

Check& Report::add(std::string label, std::string expected, std::string actual, Provenance p, Status s) {
  checks.push_back(Check{std::move(label), std::move(expected), std::move(actual), p, s});
  return checks.back();
}

Format format_from_string(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw Error(ErrorCode::invalid_argument, "unknown format \"" + s + "\" (json or csv)");
}

Json report_to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"label", c.label},
                      {"expected", c.expected},
                      {"actual", c.actual},
                      {"provenance", provenance_name(c.provenance)},
                      {"status", status_name(c.status)}});
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return {{"name", r.name},
          {"status", status_name(r.status())},
          {"params", params},
          {"checks", checks},
          {"artifacts", r.artifacts},
          {"details", r.details}};
}

namespace {

Status status_from(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "undetermined") return Status::undetermined;
  throw Error(ErrorCode::parse, "unknown check status \"" + s + "\"");
}

Provenance provenance_from(const std::string& s) {
  if (s == "published") return Provenance::published;
  if (s == "derived") return Provenance::derived;
  if (s == "trivial") return Provenance::trivial;
  throw Error(ErrorCode::parse, "unknown provenance \"" + s + "\"");
}

}  // namespace

Report report_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::parse, "report must be a JSON object");
  Report r;
  try {
    r.name = j.value("name", std::string());
    if (j.contains("params"))
      for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<std::string>();
    if (j.contains("checks"))
      for (const auto& c : j.at("checks"))
        r.checks.push_back(Check{c.at("label").get<std::string>(), c.at("expected").get<std::string>(),
                                 c.at("actual").get<std::string>(), provenance_from(c.at("provenance").get<std::string>()),
                                 status_from(c.at("status").get<std::string>())});
    if (j.contains("artifacts")) r.artifacts = j.at("artifacts").get<std::vector<std::string>>();
    if (j.contains("details")) r.details = j.at("details");
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed report: ") + e.what());
  }
  return r;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string report_to_csv(const Report& r) {
  std::string out = "label,status,expected,actual,provenance\n";
  for (const auto& c : r.checks)
    out += csv_field(c.label) + "," + status_name(c.status) + "," + csv_field(c.expected) + "," +
           csv_field(c.actual) + "," + provenance_name(c.provenance) + "\n";
  return out;
}

std::string render(const Report& r, Format f) {
  return f == Format::json ? report_to_json(r).dump(2) + "\n" : report_to_csv(r);
}

void emit(const Report& r, Format f, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  out << render(r, f);
  out.close();
  if (!out) throw Error(ErrorCode::io, "write to " + path + " failed");
}

}  // namespace shadowlab
