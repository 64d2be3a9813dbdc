#pragma once

// Classical and generalized Kloosterman sums, Ramanujan sums, the CRT
// factorization of the generalized sum, coset counts and Weil bounds.

#include <cmath>
#include <complex>
#include <functional>
#include <list>
#include <mutex>
#include <unordered_map>
#include <vector>

#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>

#include "arith.hpp"
#include "cusps.hpp"

namespace phmf {

using cplx = std::complex<double>;

struct ExactCyclotomicSum {
  cplx value{0.0, 0.0};
  i64 terms = 0;
  bool exact_zero = false;
};

// e(k/M), with k reduced exactly before the trig call.
inline cplx unit_root(i64 k, i64 M) {
  k = mod(k, M);
  if (2 * k > M) k -= M;
  const double x = 2.0 * static_cast<double>(k) / static_cast<double>(M);
  return {boost::math::cos_pi(x), boost::math::sin_pi(x)};
}

// Sum of counts[k] * e(k/M).
inline cplx phase_histogram_sum(const std::vector<i64>& counts, i64 M) {
  cplx s{0.0, 0.0};
  for (i64 k = 0; k < M; ++k)
    if (counts[k] != 0) s += static_cast<double>(counts[k]) * unit_root(k, M);
  return s;
}

inline ExactCyclotomicSum classical_kloosterman(i64 m, i64 n, i64 c) {
  if (c < 1) throw DomainError("NonPositive", "Kloosterman modulus must be >= 1");
  ExactCyclotomicSum out;
  if (c == 1) {
    out.value = 1.0;
    out.terms = 1;
    return out;
  }
  std::vector<i64> counts(static_cast<std::size_t>(c), 0);
  const i64 mm = mod(m, c), nn = mod(n, c);
  for (i64 d = 1; d < c; ++d) {
    if (gcd(d, c) != 1) continue;
    const i64 inv = mod_inverse(d, c);
    ++counts[(mulmod(mm, d, c) + mulmod(nn, inv, c)) % c];
    ++out.terms;
  }
  out.value = phase_histogram_sum(counts, c);
  return out;
}

// Kluyver: c_q(m) = sum over u | gcd(q, m) of mu(q/u) u.
inline i64 ramanujan_sum(i64 q, i64 m) {
  if (q < 1) throw DomainError("NonPositive", "Ramanujan sum modulus must be >= 1");
  const i64 g = gcd(q, m < 0 ? -m : m);
  i64 s = 0;
  for (i64 u : divisors(g)) s += mobius(q / u) * u;
  return s;
}

// Same, with a precomputed Mobius table covering q.
inline i64 ramanujan_sum(i64 q, i64 m, const std::vector<int>& mu) {
  const i64 g = gcd(q, m < 0 ? -m : m);
  i64 s = 0;
  for (i64 u = 1; u * u <= g; ++u) {
    if (g % u != 0) continue;
    s += mu[q / u] * u;
    const i64 v = g / u;
    if (v != u) s += mu[q / v] * v;
  }
  return s;
}

inline bool kloosterman_admissible(const CuspData& cusp, i64 c) {
  return gcd(cusp.N, c) == cusp.gamma;
}

enum class KloostermanMethod { direct, factored };

struct GenKloostermanResult {
  ExactCyclotomicSum sum;
  bool fallback_used = false;  // factored requested at i-infinity
};

inline ExactCyclotomicSum gen_kloosterman_direct(const CuspData& cusp, i64 m, i64 n, i64 c) {
  if (c < 1) throw DomainError("NonPositive", "Kloosterman modulus must be >= 1");
  ExactCyclotomicSum out;
  if (!kloosterman_admissible(cusp, c)) {
    out.exact_zero = true;
    return out;
  }
  const i64 ell = cusp.width, M = ell * c, Q = cusp.N / cusp.gamma;
  const i64 start = mod((c / cusp.gamma) * cusp.delta(), Q);
  std::vector<i64> counts(static_cast<std::size_t>(M), 0);
  const i64 mm = mod(m, M), nl = mod(mulmod(n, ell, M), M);
  for (i64 d = start; d < M; d += Q) {
    if (gcd(d, c) != 1) continue;
    const i64 inv = mod_inverse(d, c);
    ++counts[(mulmod(mm, d, M) + mulmod(nl, inv, M)) % M];
    ++out.terms;
  }
  if (out.terms == 0) out.exact_zero = true;
  out.value = phase_histogram_sum(counts, M);
  return out;
}

// CRT route: average over r mod N1 of a product of two classical sums.
inline ExactCyclotomicSum gen_kloosterman_factored(const CuspData& cusp, i64 m, i64 n, i64 c) {
  if (c < 1) throw DomainError("NonPositive", "Kloosterman modulus must be >= 1");
  ExactCyclotomicSum out;
  if (!kloosterman_admissible(cusp, c)) {
    out.exact_zero = true;
    return out;
  }
  const auto& D = cusp.dec;
  const i64 g = c / cusp.gamma, delta = cusp.delta();
  const i64 L1c = D.ell1 * c;
  const i64 c1 = part_supported_on(c, D.ell1), c2 = c / c1;
  const i64 L1c1 = D.ell1 * c1;
  const i64 inv_l2 = mod_inverse(D.ell2, L1c);
  const i64 inv_L1c1_c2 = mod_inverse(L1c1, c2);
  const i64 inv_c1_c2 = mod_inverse(c1, c2);
  const i64 inv_c2_L1c1 = mod_inverse(c2, L1c1);

  cplx pref{1.0, 0.0};
  if (D.ell2 > 1) {
    const i64 k = mulmod(mulmod(m, mod_inverse(L1c, D.ell2), D.ell2), mulmod(g, delta, D.ell2), D.ell2);
    pref = unit_root(k, D.ell2);
  }
  cplx acc{0.0, 0.0};
  for (i64 r = 0; r < D.N1; ++r) {
    const i64 mr = mod(mulmod(m, inv_l2, L1c) + (L1c / D.N1) * r, L1c);
    const auto k2 = classical_kloosterman(mulmod(mr, inv_L1c1_c2, c2), mulmod(n, inv_c1_c2, c2), c2);
    const auto k1 = classical_kloosterman(mulmod(mr, inv_c2_L1c1, L1c1),
                                          mulmod(mulmod(n, inv_c2_L1c1, L1c1), D.ell1, L1c1), L1c1);
    acc += unit_root(-mulmod(r, mulmod(g, delta, D.N1), D.N1), D.N1) * k1.value * k2.value;
    out.terms += k1.terms * k2.terms;
  }
  out.terms /= D.N1;
  out.value = pref * acc / static_cast<double>(D.N1);
  return out;
}

inline GenKloostermanResult gen_kloosterman(const LevelContext& ctx, const CuspData& cusp, i64 m, i64 n,
                                            i64 c, KloostermanMethod method) {
  if (cusp.N != ctx.N) throw DomainError("InvalidCusp", "cusp does not belong to this level");
  GenKloostermanResult r;
  if (method == KloostermanMethod::direct) {
    r.sum = gen_kloosterman_direct(cusp, m, n, c);
  } else if (cusp.is_infinity()) {
    r.fallback_used = true;
    if (c % ctx.N == 0)
      r.sum = classical_kloosterman(m, n, c);
    else
      r.sum.exact_zero = true;
  } else {
    r.sum = gen_kloosterman_factored(cusp, m, n, c);
  }
  return r;
}

// K_{inf,0}(m, n; c) = K(m [N]_c, n; c) when gcd(c, N) = 1.
inline ExactCyclotomicSum gen_kloosterman_zero_cusp(const LevelContext& ctx, i64 m, i64 n, i64 c) {
  ExactCyclotomicSum out;
  if (gcd(c, ctx.N) != 1) {
    out.exact_zero = true;
    return out;
  }
  return classical_kloosterman(mulmod(m, mod_inverse(ctx.N, c), c), n, c);
}

// Literal (A2/N1) phi(A1 c / gamma); zero when gamma does not divide c.
inline Rational coset_count_closed(const LevelContext& ctx, const CuspData& cusp, i64 c) {
  if (cusp.N != ctx.N || cusp.is_infinity())
    throw DomainError("InvalidCusp", "coset count formula needs a cusp inequivalent to i-infinity");
  if (c % cusp.gamma != 0) return Rational(0);
  return Rational(cusp.dec.A2, cusp.dec.N1) * Rational(euler_phi(cusp.dec.A1 * c / cusp.gamma));
}

enum class WeilMode { classical, general };

struct WeilOptions {
  double epsilon = 0.5;
  double constant = 1.0;
};

// The general envelope uses sqrt(max(|n|, 1)) so that n = 0 is not mapped to 0.
inline double weil_bound(i64 m, i64 n, i64 c, WeilMode mode, WeilOptions opt = {}) {
  if (mode == WeilMode::classical) {
    if (m == 0 && n == 0) throw DomainError("Precondition", "Weil bound needs (m, n) != (0, 0)");
    const i64 g = gcd(gcd(m < 0 ? -m : m, n < 0 ? -n : n), c);
    return static_cast<double>(num_divisors(c)) * std::sqrt(static_cast<double>(c)) *
           std::sqrt(static_cast<double>(g));
  }
  const double an = static_cast<double>(n < 0 ? -n : n);
  return opt.constant * std::pow(static_cast<double>(c), 1.0 + opt.epsilon) * std::sqrt(std::max(an, 1.0));
}

// Bounded LRU cache for generalized sums. Values never depend on cache state.
class KloostermanCache {
 public:
  explicit KloostermanCache(std::size_t capacity = 1 << 16) : capacity_(capacity) {}

  ExactCyclotomicSum get(const CuspData& cusp, i64 m, i64 n, i64 c) {
    const Key key{cusp.N, cusp.alpha, cusp.gamma, cusp.delta(), m, n, c};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = index_.find(key);
      if (it != index_.end()) {
        order_.splice(order_.begin(), order_, it->second);
        ++hits_;
        return it->second->second;
      }
    }
    const ExactCyclotomicSum v = compute(cusp, m, n, c);
    std::lock_guard<std::mutex> lock(mu_);
    if (index_.find(key) == index_.end()) {
      order_.emplace_front(key, v);
      index_[key] = order_.begin();
      if (order_.size() > capacity_) {
        index_.erase(order_.back().first);
        order_.pop_back();
      }
    }
    return v;
  }

  std::size_t hits() const { return hits_; }
  std::size_t size() const { return order_.size(); }

 private:
  struct Key {
    i64 N, alpha, gamma, delta, m, n, c;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = 1469598103934665603ull;
      for (i64 v : {k.N, k.alpha, k.gamma, k.delta, k.m, k.n, k.c})
        h = (h ^ std::hash<i64>{}(v)) * 1099511628211ull;
      return h;
    }
  };

  static ExactCyclotomicSum compute(const CuspData& cusp, i64 m, i64 n, i64 c) {
    if (cusp.is_infinity()) {
      if (c % cusp.N != 0) return ExactCyclotomicSum{{0.0, 0.0}, 0, true};
      return classical_kloosterman(m, n, c);
    }
    if (cusp.gamma == 1 && cusp.alpha == 0) {
      if (gcd(c, cusp.N) != 1) return ExactCyclotomicSum{{0.0, 0.0}, 0, true};
      return classical_kloosterman(mulmod(m, mod_inverse(cusp.N, c), c), n, c);
    }
    return gen_kloosterman_direct(cusp, m, n, c);
  }

  std::size_t capacity_;
  std::list<std::pair<Key, ExactCyclotomicSum>> order_;
  std::unordered_map<Key, decltype(order_)::iterator, KeyHash> index_;
  std::mutex mu_;
  std::size_t hits_ = 0;
};

}  // namespace phmf
