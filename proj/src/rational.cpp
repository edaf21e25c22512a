#include "hbgw/rational.hpp"

#include <stdexcept>
#include <vector>

namespace hbgw {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty input");
  mpq_class q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("parse_rational: malformed rational '" + text + "'");
  if (q.get_den() == 0)
    throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  mpz_class z;
  mpz_fac_ui(z.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(z);
}

Rational double_factorial(long n) {
  if (n == -1 || n == 1) return 1;
  if (n < -1 || n % 2 == 0)
    throw std::invalid_argument("double_factorial: expected odd n >= -1");
  mpz_class z;
  mpz_2fac_ui(z.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(z);
}

Rational binomial(long n, long k) {
  if (k < 0) return 0;
  // C(n, k) for negative n via C(n, k) = (-1)^k C(k - n - 1, k).
  if (n < 0) {
    Rational c = binomial(k - n - 1, k);
    return (k % 2 == 0) ? c : -c;
  }
  if (k > n) return 0;
  mpz_class z;
  mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return Rational(z);
}

Rational binomial(const Rational& a, long k) {
  if (k < 0) return 0;
  Rational acc = 1;
  for (long i = 0; i < k; ++i) acc *= (a - i) / (i + 1);
  return acc;
}

const Rational& bernoulli(int n) {
  static std::vector<Rational> cache;  // cache[k] = B_k
  if (n < 0) throw std::invalid_argument("bernoulli: negative index");
  while (static_cast<int>(cache.size()) <= n) {
    int m = static_cast<int>(cache.size());
    if (m == 0) {
      cache.emplace_back(1);
      continue;
    }
    // sum_{j=0}^{m} C(m+1, j) B_j = 0  =>  B_m.
    Rational s = 0;
    for (int j = 0; j < m; ++j) s += binomial(m + 1L, j) * cache[j];
    cache.push_back(-s / binomial(m + 1L, m));
  }
  return cache[n];
}

Rational rational_pow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw std::invalid_argument("rational_pow: 0^negative");
    return rational_pow(1 / base, -e);
  }
  Rational acc = 1;
  Rational b = base;
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) acc *= b;
    if (k > 1) b *= b;
  }
  return acc;
}

}  // namespace hbgw
