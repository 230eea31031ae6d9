#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace totlab {

// Exact probabilities. Denominators stay below C(N,m)*2^m*|ensemble|, far
// inside 64-bit range for the network sizes the exact enumerator accepts.
using Rational = boost::rational<std::int64_t>;

// Compare rationals only against rationals: under C++20 rewritten
// comparisons boost's mixed rational/integer operator== recurses forever.
inline const Rational kZero{0};
inline const Rational kOne{1};

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace totlab
