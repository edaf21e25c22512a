#pragma once

#include <gmpxx.h>

#include <string>

namespace hbgw {

// Exact rational scalar. All engine arithmetic happens over Q; values are
// kept canonical (reduced, positive denominator) by GMP.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parse "p", "-p", "p/q". Throws std::invalid_argument on malformed input
/// or zero denominator.
Rational parse_rational(const std::string& text);

/// Canonical "p" or "p/q" form, no spaces.
std::string to_string(const Rational& q);

/// n! for n >= 0.
Rational factorial(long n);

/// Odd double factorial n!! for n >= -1 (with (-1)!! = 1). Throws on even or
/// smaller n: the engine only ever needs the odd ladder.
Rational double_factorial(long n);

/// Binomial C(n, k) for integer n (possibly negative), k >= 0.
Rational binomial(long n, long k);

/// Generalized binomial C(a, k) = a(a-1)...(a-k+1)/k! for rational a.
Rational binomial(const Rational& a, long k);

/// Bernoulli number B_n (B_1 = -1/2 convention; only even n are used by
/// callers). Memoized.
const Rational& bernoulli(int n);

/// base^e for integer e (negative e inverts; throws on 0^negative).
Rational rational_pow(const Rational& base, long e);

}  // namespace hbgw
