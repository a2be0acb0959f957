#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace carnot {

using Rational = mpq_class;

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

// p/q in lowest terms; mpq_class(p, q) alone does not reduce.
inline Rational make_rational(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// "p" or "p/q", lowest terms.
std::string to_string(const Rational& q);

// Accepts "p", "-p", "p/q"; throws ParseError.
Rational parse_rational(std::string_view text);

Rational factorial(int n);

}  // namespace carnot
