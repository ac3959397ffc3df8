#pragma once
// Exact rational arithmetic.  Rational is GMP's mpq_class; Probability is a
// Rational validated to lie in [0,1] at construction boundaries.  Doubles are
// converted to rationals exactly (binary64 values are dyadic), so approximate
// inputs stay closed under arithmetic and only comparisons ever use slack.

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "streett/errors.hpp"

namespace streett {

using Rational = mpq_class;
using Probability = Rational;

inline std::string format_rational(const Rational& q) { return q.get_str(); }

// Accepts "p", "-p", or "p/q" with decimal digits and nonzero q.
inline Rational parse_rational(const std::string& text) {
  auto bad = [&]() -> Rational {
    fail("ValidationError", "not a rational literal: '" + text + "'");
  };
  if (text.empty()) bad();
  std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (i == text.size()) bad();
  bool seen_slash = false;
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] == '/') {
      if (seen_slash || j == i || j + 1 == text.size()) bad();
      seen_slash = true;
      continue;
    }
    if (text[j] < '0' || text[j] > '9') bad();
  }
  Rational q;
  if (q.set_str(text, 10) != 0) bad();
  if (q.get_den() == 0) fail("ValidationError", "zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational rational_pow(const Rational& base, std::uint64_t exp) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  out.canonicalize();
  return out;
}

inline bool is_probability(const Rational& q) { return q >= 0 && q <= 1; }

inline Probability require_probability(const Rational& q, const std::string& what) {
  if (!is_probability(q))
    fail("InvalidProbability", what + " = " + format_rational(q) + " is outside [0,1]");
  return q;
}

// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) { return Rational(x); }

// Clamps values within `slack` of the unit interval, rejects anything farther.
inline Probability probability_from_double(double x, double slack = 1e-12) {
  Rational q = rational_from_double(x);
  Rational s = rational_from_double(slack);
  if (q < -s || q > 1 + s)
    fail("InvalidProbability", "double " + std::to_string(x) + " is outside [0,1] beyond slack");
  if (q < 0) return Rational(0);
  if (q > 1) return Rational(1);
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace streett
