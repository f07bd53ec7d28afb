#pragma once

#include <string>

#include "opalg/axiom_report.hpp"
#include "opalg/ratmat.hpp"

namespace opalg {

// V-representation of {x : Ax >= 0}: extreme rays modulo the lineality
// space, plus a basis of the lineality space itself.
struct ConeVRep {
  RatMat rays;
  RatMat lineality;
};

// Double description: extreme rays + lineality of {x : row . x >= 0 for all rows}.
// An empty constraint list yields the whole space.
ConeVRep rays_from_halfspaces(const RatMat& rows, int dim);

// A cone kept in both representations at once. `generators` always spans the
// cone by nonnegative combinations (lineality shows up as +/- vector pairs),
// and `facets` are inequality normals n with n.x >= 0 (implicit equalities
// likewise as +/- pairs). Both lists are canonical: primitive integer
// vectors, sorted lexicographically.
struct PolyhedralCone {
  int dim = 0;
  RatMat generators;
  RatMat facets;

  static PolyhedralCone from_generators(int dim, RatMat gens);
  static PolyhedralCone from_facets(int dim, RatMat facets);

  bool contains(const RatVec& x) const;  // all facet inequalities hold
  bool same_cone(const PolyhedralCone& other) const;
};

PolyhedralCone dual_cone(const PolyhedralCone& c);

// Regularity ledger: generating (rank = dim), pointed (no +/- generator
// pair), with convexity/closedness recorded as structural passes.
AxiomReport is_regular(const PolyhedralCone& c);

// Exact two-sided inclusion test against the Euclidean dual.
bool is_self_dual(const PolyhedralCone& c);

// --- Polytopes ------------------------------------------------------------

// {x : eq . x = eq_rhs, ineq . x >= ineq_rhs}
struct PolytopeHRep {
  int dim = 0;
  RatMat eq;
  RatVec eq_rhs;
  RatMat ineq;
  RatVec ineq_rhs;
};

struct PolytopeVertices {
  bool empty = false;
  RatMat vertices;
  RatMat ray_dirs;  // recession directions; nonempty means unbounded
};

inline constexpr int kVertexEnumDimCap = 8;

// Exact vertex enumeration. Equalities are eliminated first; the reduced
// dimension must not exceed kVertexEnumDimCap (throws std::runtime_error).
PolytopeVertices enumerate_vertices(const PolytopeHRep& h);

// Plain-text exchange format: `dim` line, then `generators` / `facets`
// sections of exact-rational rows.
PolyhedralCone parse_cone_file(const std::string& text);
std::string emit_cone_file(const PolyhedralCone& c);

}  // namespace opalg
