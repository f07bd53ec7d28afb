#pragma once

#include "opalg/phenomenology.hpp"
#include "opalg/structure.hpp"

namespace opalg {

// Probabilistic-equivalence class of events. The signature (one exact
// probability per state) is the class identity; ids are assigned in
// lexicographic signature order so they do not depend on event enumeration.
struct EffectClass {
  int id = -1;
  std::vector<Event> representatives;
  RatVec signature;
};

struct WeakEffectAlgebra {
  int size = 0;
  std::vector<std::vector<int>> plus;  // -1 undefined
  int unit = -1;
  int zero = -1;
  std::vector<int> supplement;          // total
  std::vector<RatVec> signatures;       // class id -> signature
  std::vector<std::vector<Event>> reps; // class id -> representative events
  std::vector<std::string> labels;

  // Provenance: which theory the quotient came from.
  PhenomenologicalTheory source;

  int class_of(const Event& ev) const;  // throws on foreign events
  // Induced state omega^e for a source state: signature coordinates.
  RatVec induced_state(int state_index) const;
  RatMat induced_states() const;
};

std::vector<EffectClass> effect_classes(const PhenomenologicalTheory& t);

// Theorem-1 construction: quotient the Boolean event logics by probabilistic
// equivalence; x + y is defined exactly when disjoint same-measurement
// representatives exist, with witness independence verified exhaustively
// (a violation is an internal-consistency failure and throws).
WeakEffectAlgebra build_wea(const PhenomenologicalTheory& t);

PartialStructure to_structure(const WeakEffectAlgebra& w);

struct WeaknessWitness {
  bool properly_weak = false;
  std::array<int, 3> triple{-1, -1, -1};
  bool left_defined = false;  // (x+y)+z side is the defined one
  std::string note;
};

// Scans all triples: either returns a triple with one association defined
// and the other undefined, or certifies strong associativity by exhaustion.
WeaknessWitness detect_proper_weakness(const PartialStructure& s);
WeaknessWitness detect_proper_weakness(const WeakEffectAlgebra& w);

bool is_weakness_witness(const PartialStructure& s, int x, int y, int z);

struct CompletionResult {
  bool completed = false;        // reached a structure passing the EA profile
  int rounds = 0;
  PartialStructure algebra;      // final table (elements appended, ids stable)
  std::vector<RatVec> signatures;
  std::vector<int> embedding;    // input id -> output id (identity, recorded)
  int original_size = 0;
  AxiomReport ea_report;
  std::vector<std::string> diagnostics;  // aborted adjunctions, limits
};

// Saturation for the completion conjecture: whenever only one side of the
// associativity equation exists, impose the equation. A forced sum whose
// signature (sum of signatures) matches no class becomes a fresh element,
// unless a coordinate exceeds 1, which aborts that adjunction.
CompletionResult attempt_completion(const WeakEffectAlgebra& w, int max_rounds);

}  // namespace opalg
