// Exact rational arithmetic carrier used throughout the library.
//
// All model values, term evaluation results and Euler steps are exact
// rationals; there is no floating point anywhere in the evaluation path.
#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dglsc {

using Rat = boost::rational<long long>;

// Renders `3`, `-2`, `1/2`, `-7/3` — no spaces, denominator omitted when 1.
inline std::string showRat(const Rat& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) {
    s += '/';
    s += std::to_string(r.denominator());
  }
  return s;
}

inline bool isInteger(const Rat& r) { return r.denominator() == 1; }

// Mathematical modulus on integers: result always in [0, m).
inline long long modFloor(long long v, long long m) {
  long long r = v % m;
  return r < 0 ? r + m : r;
}

// Reduces an integer-valued rational modulo m; caller must check isInteger.
inline Rat modReduce(const Rat& v, long long m) {
  if (!isInteger(v)) {
    throw std::invalid_argument("modReduce: value " + showRat(v) +
                                " is not an integer");
  }
  return Rat(modFloor(v.numerator(), m));
}

}  // namespace dglsc
