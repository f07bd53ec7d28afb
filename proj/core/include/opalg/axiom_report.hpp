#pragma once

#include <string>
#include <vector>

namespace opalg {

// One checked law. Failed verdicts always carry a concrete witness: element
// ids in `witness` and/or a human-readable `note`.
struct Verdict {
  std::string axiom;
  bool pass = false;
  std::vector<int> witness;
  std::string note;
};

struct AxiomReport {
  std::string profile;
  std::vector<Verdict> verdicts;

  bool all_pass() const {
    for (const auto& v : verdicts) {
      if (!v.pass) return false;
    }
    return true;
  }

  const Verdict* find(const std::string& axiom) const {
    for (const auto& v : verdicts) {
      if (v.axiom == axiom) return &v;
    }
    return nullptr;
  }

  void add(std::string axiom, bool pass, std::vector<int> witness = {}, std::string note = {}) {
    verdicts.push_back({std::move(axiom), pass, std::move(witness), std::move(note)});
  }
};

}  // namespace opalg
