#pragma once

// Integer and multiplicative-function primitives.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace phmf {

using i64 = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<i64>;

struct DomainError : std::domain_error {
  std::string code;
  DomainError(std::string c, const std::string& what)
      : std::domain_error(what), code(std::move(c)) {}
};

struct PrimePower {
  i64 prime;
  int exponent;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  i64 value = 1;
  std::vector<PrimePower> factors;

  bool divisible_by_prime(i64 p) const {
    for (const auto& f : factors)
      if (f.prime == p) return true;
    return false;
  }
  int ord(i64 p) const {
    for (const auto& f : factors)
      if (f.prime == p) return f.exponent;
    return 0;
  }
  std::vector<i64> primes() const {
    std::vector<i64> out;
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
  }
};

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

// Trial division with a 2,3,5 wheel.
inline Factorization factorize(i64 n) {
  if (n < 1) throw DomainError("NonPositive", "factorize: n must be >= 1");
  Factorization f;
  f.value = n;
  auto take = [&](i64 p) {
    if (n % p != 0) return;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  };
  take(2);
  take(3);
  take(5);
  static constexpr int gaps[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  i64 p = 7;
  for (int k = 0; p * p <= n; p += gaps[k], k = (k + 1) % 8) take(p);
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

enum class Multiplicative { mobius, phi, sigma, tau };

inline i64 multiplicative(Multiplicative kind, const Factorization& f) {
  i64 r = 1;
  for (const auto& [p, e] : f.factors) {
    switch (kind) {
      case Multiplicative::mobius:
        if (e > 1) return 0;
        r = -r;
        break;
      case Multiplicative::phi: {
        i64 pk = 1;
        for (int i = 1; i < e; ++i) pk *= p;
        r *= pk * (p - 1);
        break;
      }
      case Multiplicative::sigma: {
        i64 s = 1, pk = 1;
        for (int i = 0; i < e; ++i) {
          pk *= p;
          s += pk;
        }
        r *= s;
        break;
      }
      case Multiplicative::tau:
        r *= e + 1;
        break;
    }
  }
  return r;
}

inline i64 multiplicative(Multiplicative kind, i64 n) {
  return multiplicative(kind, factorize(n));
}

inline i64 mobius(i64 n) { return multiplicative(Multiplicative::mobius, n); }
inline i64 euler_phi(i64 n) { return multiplicative(Multiplicative::phi, n); }
inline i64 sigma(i64 n) { return multiplicative(Multiplicative::sigma, n); }
inline i64 num_divisors(i64 n) { return multiplicative(Multiplicative::tau, n); }

inline std::vector<i64> divisors(const Factorization& f) {
  std::vector<i64> d{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = d.size();
    i64 pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) d.push_back(d[j] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

inline std::vector<i64> divisors(i64 n) { return divisors(factorize(n)); }

// Canonical inverse in [0, m).
inline i64 mod_inverse(i64 a, i64 m) {
  if (m < 1) throw DomainError("NonPositive", "mod_inverse: modulus must be >= 1");
  if (m == 1) return 0;
  i64 r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const i64 q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (r0 != 1)
    throw DomainError("NotInvertible", "mod_inverse: gcd(" + std::to_string(a) + ", " +
                                           std::to_string(m) + ") != 1");
  return mod(s0, m);
}

// n = n1*n2 with gcd(n1, N) = 1 and every prime of n2 dividing N.
inline std::pair<i64, i64> split_coprime(i64 n, i64 N) {
  if (n < 1 || N < 1) throw DomainError("NonPositive", "split_coprime: arguments must be >= 1");
  i64 n2 = 1, rest = n;
  for (i64 g = gcd(rest, N); g > 1; g = gcd(rest, g)) {
    rest /= g;
    n2 *= g;
  }
  return {rest, n2};
}

// Largest divisor of n supported on the primes of S.
inline i64 part_supported_on(i64 n, i64 S) { return split_coprime(n, S).second; }

enum class GroupKind { gamma0, gamma1 };

inline BigInt group_index(GroupKind kind, i64 N) {
  if (N < 1) throw DomainError("NonPositive", "group_index: N must be >= 1");
  BigInt r = 1;
  for (const auto& [p, e] : factorize(N).factors) {
    BigInt pk = 1;
    const int top = kind == GroupKind::gamma0 ? e - 1 : 2 * e - 2;
    for (int i = 0; i < top; ++i) pk *= p;
    r *= kind == GroupKind::gamma0 ? pk * (p + 1) : pk * (BigInt(p) * p - 1);
  }
  return r;
}

struct LevelContext {
  i64 N = 1;
  Factorization factorization;
  i64 index_gamma0 = 1;
  i64 index_gamma1 = 1;

  // 24 / [SL2(Z) : Gamma1(N)]
  Rational c24() const { return Rational(24, index_gamma1); }
  double index0() const { return static_cast<double>(index_gamma0); }
};

inline LevelContext make_level(i64 N) {
  if (N < 1) throw DomainError("NonPositive", "level N must be >= 1");
  if (N > 10'000'000) throw DomainError("LevelTooLarge", "level N must be <= 10^7");
  LevelContext ctx;
  ctx.N = N;
  ctx.factorization = factorize(N);
  ctx.index_gamma0 = static_cast<i64>(group_index(GroupKind::gamma0, N));
  ctx.index_gamma1 = static_cast<i64>(group_index(GroupKind::gamma1, N));
  return ctx;
}

// Linear sieve for mu up to n.
inline std::vector<int> mobius_table(i64 n) {
  std::vector<int> mu(static_cast<std::size_t>(n + 1), 1);
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  std::vector<i64> primes;
  if (n >= 0) mu[0] = 0;
  for (i64 i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (i64 p : primes) {
      if (i * p > n) break;
      composite[i * p] = true;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  return mu;
}

inline std::vector<int> divisor_count_table(i64 n) {
  std::vector<int> t(static_cast<std::size_t>(n + 1), 0);
  for (i64 d = 1; d <= n; ++d)
    for (i64 k = d; k <= n; k += d) ++t[k];
  return t;
}

}  // namespace phmf
