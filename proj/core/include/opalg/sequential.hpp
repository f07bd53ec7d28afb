#pragma once

#include <map>
#include <memory>

#include "opalg/phenomenology.hpp"

namespace opalg {

using OutcomeString = std::vector<int>;  // global outcome indices, in order

// Conditional state-update rule: the theory file format never fixes how a
// state updates after an outcome, so sequential closure takes the rule as
// an explicit input. Tokens are opaque handles owned by the implementation
// (a state index, a cached density matrix, ...).
class Instrument {
 public:
  virtual ~Instrument() = default;
  virtual int initial_token(int state_index) = 0;
  // Exact conditional outcome probabilities for one measurement, in the
  // measurement's outcome order; must sum to 1 exactly.
  virtual RatVec conditional_probs(int token, int measurement) = 0;
  virtual int successor(int token, int outcome_global) = 0;
};

// Identity update: the state after any outcome is the state before it.
class StateUnchangedInstrument : public Instrument {
 public:
  explicit StateUnchangedInstrument(const PhenomenologicalTheory& t) : theory_(&t) {}
  int initial_token(int state_index) override { return state_index; }
  RatVec conditional_probs(int token, int measurement) override;
  int successor(int token, int) override { return token; }

 private:
  const PhenomenologicalTheory* theory_;
};

struct SequentialTheory {
  PhenomenologicalTheory theory;
  int depth = 1;
  std::vector<TreeNode> trees;
  // Node-path probabilities per state and tree (leaves and all prefixes).
  // per_tree[state][tree] maps node strings (including the empty string) to
  // their exact probability within that tree.
  std::vector<std::vector<std::map<OutcomeString, Rat>>> per_tree;
  // Merged view: probability per realizable string (noncontextual).
  std::vector<std::map<OutcomeString, Rat>> string_probs;

  bool realizable(const OutcomeString& s) const {
    return !string_probs.empty() && string_probs[0].count(s) > 0;
  }
};

// All conditional-composition trees of depth <= `depth` over the theory's
// measurements (each outcome independently continues with any measurement or
// stops). Throws std::runtime_error past `tree_cap`.
std::vector<TreeNode> enumerate_trees(const PhenomenologicalTheory& t, int depth,
                                      size_t tree_cap = 4096);

// Sequential closure of a theory to the given depth under an instrument.
// String probabilities are exact products of conditional probabilities, so
// prefix consistency holds exactly by construction.
SequentialTheory build_sequential_theory(const PhenomenologicalTheory& t, Instrument& instrument,
                                         int depth, size_t tree_cap = 4096);

// Sequential theory from `tree`/`seqstate` declarations in the file.
SequentialTheory sequential_from_declarations(const PhenomenologicalTheory& t);

// Validates: per-tree leaf normalization, prefix consistency, cross-tree
// noncontextuality of string probabilities, and independence of string
// probabilities from sibling-subtree choices. Exact; failures carry the
// offending string.
AxiomReport validate_sequential(const SequentialTheory& seq);

std::string string_to_text(const PhenomenologicalTheory& t, const OutcomeString& s);

int tree_depth(const TreeNode& n);

}  // namespace opalg
