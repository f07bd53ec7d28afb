#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <vector>

namespace opalg {

// Exact rational scalar used everywhere outside the quantum module.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// Canonical "p/q" form (q always printed, lowest terms, q > 0).
std::string rat_to_string(const Rat& r);

// Accepts "p/q" or a bare integer "p". Throws std::invalid_argument on junk.
Rat rat_from_string(const std::string& text);

// Exact conversion; every finite double is a dyadic rational.
Rat rat_from_double(double x);

// Nearest grid point k/denom (ties toward zero).
Rat round_to_grid(double x, long denom);

double to_double(const Rat& r);

std::string ratvec_to_string(const RatVec& v);

}  // namespace opalg
