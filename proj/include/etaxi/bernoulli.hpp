#pragma once

#include <vector>

#include "etaxi/rational.hpp"

namespace etaxi {

// Bernoulli numbers with B_1 = -1/2, via the defining recurrence
// sum_{k=0}^{n} C(n+1,k) B_k = 0 for n >= 1.
inline Rational bernoulli_number(long n) {
  static std::vector<Rational> cache{Rational(1)};
  for (long m = static_cast<long>(cache.size()); m <= n; ++m) {
    Rational s(0);
    for (long k = 0; k < m; ++k) s += binomial(m + 1, k) * cache[static_cast<std::size_t>(k)];
    cache.push_back(-s / binomial(m + 1, m));
  }
  return cache[static_cast<std::size_t>(n)];
}

// B_n(x) = sum_k C(n,k) B_k x^(n-k).
inline Rational bernoulli_polynomial(long n, const Rational& x) {
  Rational s(0);
  for (long k = 0; k <= n; ++k) s += binomial(n, k) * bernoulli_number(k) * x.pow(n - k);
  return s;
}

// zeta(-m, a) for integer m >= 1, exact: -B_{m+1}(a) / (m+1).
inline Rational hurwitz_zeta_negative(long m, const Rational& a) {
  if (m < 1) throw std::invalid_argument("hurwitz_zeta_negative: need m >= 1");
  return -bernoulli_polynomial(m + 1, a) / Rational(m + 1);
}

}  // namespace etaxi
