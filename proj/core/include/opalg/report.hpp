#pragma once

#include <json.hpp>

#include <optional>

#include "opalg/axiom_report.hpp"
#include "opalg/quantum.hpp"
#include "opalg/rational.hpp"

namespace opalg {

using Json = nlohmann::ordered_json;

// One CLI run. Serialization is deterministic: stable key order, no
// timestamps unless timing was explicitly requested.
struct RunReport {
  int schema = 1;
  std::string command;
  std::string inputs_digest;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, AxiomReport>> suites;
  Json artifacts = Json::object();
  std::optional<double> wall_ms;

  bool pass() const {
    for (const auto& [name, suite] : suites) {
      if (!suite.all_pass()) return false;
    }
    return true;
  }
};

std::string emit_report(const RunReport& report, const std::string& format);  // "json" | "text"

std::uint64_t fnv1a(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

Json json_of(const Rat& r);          // "p/q"
Json json_of(const RatVec& v);
Json json_of(const RatMat& m);
Json json_of(const CMat& m);         // nested arrays of [re, im]
Json json_of(const AxiomReport& r);

}  // namespace opalg
