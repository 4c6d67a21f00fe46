#ifndef STICKEL_ARITH_HPP
#define STICKEL_ARITH_HPP

// Small number-theoretic helpers shared by the other headers.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace stickel {

using std::int64_t;

inline int64_t mod_reduce(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// g = gcd(a,b) together with x,y such that a*x + b*y = g.
inline int64_t ext_gcd(int64_t a, int64_t b, int64_t& x, int64_t& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  int64_t x1, y1;
  int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline int64_t inv_mod(int64_t a, int64_t m) {
  int64_t x, y;
  int64_t g = ext_gcd(mod_reduce(a, m), m, x, y);
  if (g != 1) throw std::domain_error("inv_mod: element not invertible");
  return mod_reduce(x, m);
}

inline int64_t mul_mod(int64_t a, int64_t b, int64_t m) {
  return static_cast<int64_t>((__int128)a * b % m);
}

inline int64_t pow_mod(int64_t a, int64_t e, int64_t m) {
  int64_t r = 1 % m;
  a = mod_reduce(a, m);
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<int64_t> primes_upto(int64_t n) {
  std::vector<int64_t> ps;
  if (n < 2) return ps;
  std::vector<bool> sieve(static_cast<size_t>(n) + 1, true);
  for (int64_t p = 2; p <= n; ++p) {
    if (!sieve[p]) continue;
    ps.push_back(p);
    for (int64_t q = p * p; q <= n; q += p) sieve[q] = false;
  }
  return ps;
}

// Legendre symbol (a/p) for odd prime p; 0 when p | a.
inline int legendre(int64_t a, int64_t p) {
  a = mod_reduce(a, p);
  if (a == 0) return 0;
  int64_t s = pow_mod(a, (p - 1) / 2, p);
  return s == 1 ? 1 : -1;
}

inline int64_t euler_phi(int64_t n) {
  int64_t result = n;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

inline int64_t valuation(int64_t n, int64_t p) {
  int64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline std::vector<int64_t> prime_factors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::vector<int64_t> divisors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace stickel

#endif
