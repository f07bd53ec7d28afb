#pragma once

#include "opalg/cone.hpp"
#include "opalg/quotient.hpp"
#include "opalg/structure.hpp"

namespace opalg {

// Initial interval [0, u] of an ordered linear space given by a cone.
struct LinearInterval {
  PolyhedralCone cone;
  RatVec unit;
};

// C1-C4 (and COA15 when a product is present) on the declared scalar grid,
// plus w(la) = l w(a) for supplied states. Instances whose scalar action
// leaves the carrier are skipped and counted in the notes.
AxiomReport check_convex_axioms(const PartialStructure& s, const RatMat& states);

// Concrete Gudder-style representation via the state-probability embedding:
// each effect maps to its signature vector; + becomes vector addition, the
// unit becomes the all-ones vector u, supplement becomes u - x.
struct StateEmbedding {
  LinearInterval interval;
  RatMat embed;          // class id -> signature vector
  bool generating = false;
  AxiomReport homomorphism;  // plus/zero/unit/supplement preservation
};
StateEmbedding state_embedding(const WeakEffectAlgebra& w);

// Functionals nonnegative on the cone generators with f(u) = 1, as an exact
// polytope, plus the restriction/extension bijection data of Lemma 3.3.
struct NormalizedFunctionals {
  StatePolytope polytope;  // in the ambient space of the cone
  // For each polytope vertex: its restriction to the generators.
  RatMat restrictions;
};
NormalizedFunctionals normalized_functionals(const LinearInterval& iv);

// Extends a state on the generators (values per generator) to the unique
// linear functional; nullopt when no consistent extension exists.
std::optional<RatVec> extend_state_to_functional(const LinearInterval& iv, const RatVec& values);

// An effect algebra together with an admissible state set (vertex list).
struct EffectTheory {
  PartialStructure algebra;
  RatMat states;  // each row: one state vector over the elements
};

// A test for state w: an effect t with w(t) = 1 and s(t) < 1 for every
// other listed state. Only extremal states can have one.
std::optional<int> find_test(const EffectTheory& t, int state_index);

struct Axiom1Report {
  bool holds = false;
  std::vector<int> untestable_states;
  std::vector<std::optional<int>> tests;  // per state
};
Axiom1Report check_axiom1(const EffectTheory& t);

}  // namespace opalg
