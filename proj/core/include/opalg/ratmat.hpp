#pragma once

#include <optional>

#include "opalg/rational.hpp"

namespace opalg {

// Small dense exact-rational linear algebra. Everything here is O(n^3)
// Gaussian elimination; the workloads are desk scale by design.

Rat dot(const RatVec& a, const RatVec& b);
RatVec matvec(const RatMat& m, const RatVec& v);

RatMat identity_mat(int n);

// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<int> rref_inplace(RatMat& m);

int rank(RatMat m);

// Basis of {x : Ax = 0}; rows of A are constraints.
RatMat kernel_basis(const RatMat& a, int cols);

// One solution of Ax = b, or nullopt when inconsistent.
std::optional<RatVec> solve_linear(RatMat a, RatVec b);

// Inverse of a square nonsingular matrix; nullopt when singular.
std::optional<RatMat> invert(RatMat m);

// Scale to integer entries with gcd 1. When `orient`, flip sign so the
// first nonzero entry is positive (used for lines / facet-equality pairs).
RatVec primitive(const RatVec& v, bool orient = false);

// Lexicographic exact comparison, for canonical ordering of vector lists.
bool ratvec_less(const RatVec& a, const RatVec& b);

void sort_rows(RatMat& rows);

bool is_zero_vec(const RatVec& v);

}  // namespace opalg
