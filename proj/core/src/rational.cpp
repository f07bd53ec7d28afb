#include "opalg/rational.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace opalg {

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

Rat rat_from_string(const std::string& text) {
  auto bad = [&]() { throw std::invalid_argument("malformed rational: '" + text + "'"); };
  if (text.empty()) bad();
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty()) bad();
    Int q(den);
    if (q == 0) bad();
    return Rat(Int(num), q);
  } catch (const std::runtime_error&) {
    bad();
  }
  return Rat(0);  // unreachable
}

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
  if (x == 0.0) return Rat(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 bits of mantissa make mant * 2^53 an exact integer.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rat r{Int(scaled)};
  const int shift = exp - 53;
  const Int pow2 = Int(1) << std::abs(shift);
  if (shift >= 0) {
    r *= Rat(pow2);
  } else {
    r /= Rat(pow2);
  }
  return r;
}

Rat round_to_grid(double x, long denom) {
  if (denom <= 0) throw std::invalid_argument("grid denominator must be positive");
  const double scaled = x * static_cast<double>(denom);
  const double k = std::nearbyint(scaled);
  return Rat(Int(static_cast<long long>(k)), Int(denom));
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

std::string ratvec_to_string(const RatVec& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += rat_to_string(v[i]);
  }
  out += ")";
  return out;
}

}  // namespace opalg
