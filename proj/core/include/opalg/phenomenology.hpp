#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opalg/axiom_report.hpp"
#include "opalg/rational.hpp"

namespace opalg {

struct Measurement {
  std::string id;
  std::vector<std::string> outcomes;  // globally unique outcome names
};

// Probability assignment over all outcomes, indexed by global outcome index.
struct StateAssignment {
  std::string id;
  RatVec probs;
};

// A subset of one measurement's outcomes (global indices, sorted).
struct Event {
  int measurement = -1;
  std::vector<int> outcomes;

  bool operator==(const Event&) const = default;
  auto operator<=>(const Event&) const = default;
};

struct ConstraintLine {
  Event lhs;
  Event rhs;
  std::string text;
};

struct TreeNode {
  int measurement = -1;  // -1 = leaf
  std::vector<TreeNode> children;  // parallel to the measurement's outcomes
  bool leaf() const { return measurement < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DeclaredTree {
  std::string id;
  TreeNode root;
};

// Raw `seqstate` line: probability of an outcome string under a state.
struct SeqProbLine {
  std::string state;
  std::vector<std::string> outcomes;
  Rat prob;
};

struct PhenomenologicalTheory {
  std::vector<Measurement> measurements;
  std::vector<StateAssignment> states;
  std::vector<ConstraintLine> constraints;
  std::vector<DeclaredTree> declared_trees;
  std::vector<SeqProbLine> seq_probs;

  // Global outcome table.
  std::vector<std::string> outcome_ids;
  std::vector<int> outcome_meas;                  // global index -> measurement
  std::map<std::string, int> outcome_lookup;
  std::vector<std::vector<int>> meas_outcomes;    // measurement -> global indices

  int outcome_index(const std::string& id) const;
  Event full_event(int measurement) const;
};

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(column_) +
                           ": " + msg),
        line(line_),
        column(column_) {}
};

// Parses the theory-file grammar and validates invariants that make the
// theory unusable (duplicate ids, probabilities outside [0,1], missing
// assignments, broken normalization). Throws ParseError.
PhenomenologicalTheory parse_theory(const std::string& text);

// Canonical emission; parse(emit_theory(parse(text))) == parse(text).
std::string emit_theory(const PhenomenologicalTheory& t);

// Report-style validation: disjointness, per-state normalization, coverage,
// declared constraint lines. Never throws; failures are report entries.
AxiomReport validate_theory(const PhenomenologicalTheory& t);

// Sum of the state's probabilities over the event. Throws on an event that
// does not belong to the theory.
Rat event_probability(const PhenomenologicalTheory& t, const StateAssignment& state,
                      const Event& ev);
Rat event_probability(const PhenomenologicalTheory& t, int state_index, const Event& ev);

Event make_event(const PhenomenologicalTheory& t, const std::string& measurement,
                 const std::vector<std::string>& outcomes);

}  // namespace opalg
