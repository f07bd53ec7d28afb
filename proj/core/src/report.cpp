#include "opalg/report.hpp"

#include <iomanip>
#include <sstream>

namespace opalg {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(bytes);
  return os.str();
}

Json json_of(const Rat& r) { return rat_to_string(r); }

Json json_of(const RatVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(json_of(x));
  return a;
}

Json json_of(const RatMat& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(json_of(row));
  return a;
}

Json json_of(const CMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json json_of(const AxiomReport& r) {
  Json out = Json::object();
  out["profile"] = r.profile;
  out["pass"] = r.all_pass();
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    Json jv = Json::object();
    jv["axiom"] = v.axiom;
    jv["verdict"] = v.pass ? "pass" : "fail";
    if (!v.witness.empty()) jv["witness"] = v.witness;
    if (!v.note.empty()) jv["note"] = v.note;
    verdicts.push_back(std::move(jv));
  }
  out["verdicts"] = std::move(verdicts);
  return out;
}

std::string emit_report(const RunReport& report, const std::string& format) {
  if (format == "json") {
    Json out = Json::object();
    out["schema"] = report.schema;
    out["command"] = report.command;
    out["inputs_digest"] = report.inputs_digest;
    if (report.seed) out["seed"] = *report.seed;
    out["pass"] = report.pass();
    Json suites = Json::object();
    for (const auto& [name, suite] : report.suites) suites[name] = json_of(suite);
    out["suites"] = std::move(suites);
    out["artifacts"] = report.artifacts;
    if (report.wall_ms) out["wall_ms"] = *report.wall_ms;
    return out.dump(2) + "\n";
  }
  if (format != "text") throw std::invalid_argument("unknown report format '" + format + "'");
  std::ostringstream os;
  os << "command: " << report.command << "\n";
  os << "inputs:  " << report.inputs_digest << "\n";
  if (report.seed) os << "seed:    " << *report.seed << "\n";
  for (const auto& [name, suite] : report.suites) {
    os << "[" << name << "] profile=" << suite.profile << "\n";
    for (const auto& v : suite.verdicts) {
      os << "  " << (v.pass ? "pass" : "FAIL") << "  " << v.axiom;
      if (!v.witness.empty()) {
        os << "  witness=(";
        for (size_t i = 0; i < v.witness.size(); ++i) os << (i ? "," : "") << v.witness[i];
        os << ")";
      }
      if (!v.note.empty()) os << "  " << v.note;
      os << "\n";
    }
  }
  if (!report.artifacts.empty()) os << "artifacts: " << report.artifacts.dump(2) << "\n";
  if (report.wall_ms) os << "wall_ms: " << *report.wall_ms << "\n";
  os << (report.pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
  return os.str();
}

}  // namespace opalg
