#pragma once

#include "opalg/sequential.hpp"
#include "opalg/structure.hpp"

namespace opalg {

// An event of a sequential theory: a subset of one tree's leaf strings.
// Tree -1 is the virtual do-nothing tree whose only leaf is the empty
// string, so the identity operation and the empty event exist uniformly.
struct SeqEvent {
  int tree = -1;
  std::vector<OutcomeString> strings;  // sorted

  bool operator==(const SeqEvent&) const = default;
};

// Quotient of tree events by sequential probabilistic equivalence
// (x ~ y iff flanked probabilities w(axb) and w(ayb) agree for every
// realizable flank and state). Product is concatenation lifted to classes;
// compositions that overflow the depth bound collapse to the zero class.
struct WeakOperationAlgebra {
  int size = 0;
  std::vector<std::vector<int>> plus;  // partial
  std::vector<std::vector<int>> prod;  // total
  int unit = -1;                       // class of the empty string
  int zero = -1;                       // class of the empty event
  std::vector<std::vector<SeqEvent>> reps;
  std::vector<RatVec> eps_signature;   // per class: probability per state (empty flank)
  std::vector<std::string> labels;
  AxiomReport construction;            // witness independence, product well-definedness

  int class_of_event(const SeqEvent& ev) const;            // -1 when unknown
  int class_of_string(const OutcomeString& s) const;       // singleton event lookup
};

WeakOperationAlgebra build_woa(const SequentialTheory& seq, size_t event_cap = 5000);

PartialStructure to_structure(const WeakOperationAlgebra& w);

// Sequential-mode probabilistic equivalence on outcome strings alone.
struct StringClasses {
  std::vector<std::vector<OutcomeString>> classes;
  int class_of(const OutcomeString& s) const;
};
StringClasses sequential_string_classes(const SequentialTheory& seq);

}  // namespace opalg
