#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opalg/axiom_report.hpp"
#include "opalg/cone.hpp"
#include "opalg/rational.hpp"

namespace opalg {

// Finite carrier with a partial binary sum, optional total product and
// optional scalar action, all given by tables. -1 marks "undefined".
struct PartialStructure {
  int size = 0;
  std::vector<std::vector<int>> plus;  // size x size, -1 undefined
  int zero = -1;
  int unit = -1;                        // -1 when absent
  std::vector<std::vector<int>> prod;   // empty when absent; total otherwise
  std::vector<Rat> scalars;             // declared scalar grid
  std::vector<std::vector<int>> action; // scalars x size, -1 = leaves carrier
  std::vector<std::string> labels;      // optional element names for reports

  bool has_product() const { return !prod.empty(); }
  bool has_action() const { return !action.empty(); }
  int plus_at(int x, int y) const { return plus[x][y]; }
  std::string label(int x) const;
};

enum class Profile { PAS, WEA, EA, Orthoalgebra, OA, WOA, ConvexEA };

std::string profile_name(Profile p);

// Exhaustive verification of the profile's laws over all element tuples.
// Chain-completeness (OA10) is automatic in a finite carrier and is recorded
// as a pass with a note. Throws std::invalid_argument when a required field
// (product, unit, scalar action) is missing for the profile.
AxiomReport check_axioms(const PartialStructure& s, Profile profile);

// x <= y iff some z has x + z = y.
struct InducedOrder {
  std::vector<std::vector<bool>> leq;
  bool is_partial_order = false;  // reflexive, transitive, antisymmetric
  std::string violation;
};
InducedOrder induced_order(const PartialStructure& s);

// {t : a + t defined implies a = 0}.
std::vector<int> top_set(const PartialStructure& s);

// The unique z with y + z = x, when it exists. Throws std::invalid_argument
// on non-cancellative structures (uniqueness would fail).
std::optional<int> ominus(const PartialStructure& s, int x, int y);

// Multisets of size <= max_size whose iterated sum reaches the unit in some
// association order; one witnessing order is recorded per resolution.
struct ResolutionOfUnity {
  std::vector<int> elements;  // nondecreasing ids
  std::string witness_order;  // parenthesized expression that is defined
};
std::vector<ResolutionOfUnity> resolutions_of_unity(const PartialStructure& s, int max_size);

// State space {w : w(x)+w(y)=w(x+y) on defined pairs, w(unit)=1, 0<=w<=1}
// as an exact H-representation, with optional vertex enumeration.
struct StatePolytope {
  int dimension = 0;
  RatMat eq;        // rows with rhs appended semantics: eq . w = eq_rhs
  RatVec eq_rhs;
  RatMat ineq;      // ineq . w >= ineq_rhs
  RatVec ineq_rhs;
  bool enumerated = false;
  bool empty = false;
  RatMat vertices;
  bool separating_checked = false;
  bool separating = false;
  std::vector<int> non_separated_pair;  // witness when not separating
};

StatePolytope state_polytope(const PartialStructure& s, bool enumerate_vertices_flag,
                             const RatMat& states_to_check = {});

// w additive on every defined pair and w(unit) = 1 (exact).
bool is_state_vector(const PartialStructure& s, const RatVec& w);

// Faces of an enumerated state polytope, one per tight inequality.
struct Face {
  int supporting_constraint = -1;
  std::vector<int> members;  // vertex indices
};
std::vector<Face> polytope_faces(const StatePolytope& p);

}  // namespace opalg
