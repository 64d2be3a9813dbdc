#pragma once

// Fourier coefficients of the level-N Eisenstein-type functions H_{N,rho}
// and point evaluation of H*_{N,z} from its cusp expansions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "cusps.hpp"
#include "kloosterman.hpp"
#include "numeric.hpp"
#include "specfun.hpp"

namespace phmf {

enum class TailMode { weil_rigorous, heuristic };

struct TruncationPolicy {
  i64 c_max = 10000;
  i64 m_max = 200;
  i64 n_max = 200;
  double tol = 1e-12;
  TailMode tail_mode = TailMode::weil_rigorous;
  int threads = 1;
};

struct ApproxValue {
  cplx value{0.0, 0.0};
  double err = 0.0;
  bool rigorous = true;
};

enum class JMethod { series, euler, closed };

inline const char* to_string(JMethod m) {
  switch (m) {
    case JMethod::series: return "series";
    case JMethod::euler: return "euler";
    case JMethod::closed: return "closed";
  }
  return "unknown";
}

// Only i-infinity and 0 carry Eisenstein coefficients here.
inline bool is_zero_cusp(const CuspData& c) { return c.alpha == 0 && c.gamma == 1 && c.N > 1; }

inline void require_eisenstein_cusp(const LevelContext& ctx, const CuspData& c) {
  if (c.N != ctx.N) throw DomainError("InvalidCusp", "cusp does not belong to this level");
  if (!c.is_infinity() && !is_zero_cusp(c))
    throw DomainError("InvalidCusp", "only the cusps i-infinity and 0 are supported here");
}

// ------------------------------------------------------------ exact coefficients

namespace detail {

inline Rational sigma_prime_power(i64 p, int e) {
  if (e < 0) return Rational(0);
  i64 s = 1, pk = 1;
  for (int i = 0; i < e; ++i) {
    pk *= p;
    s += pk;
  }
  return Rational(s);
}

inline Rational rational_pow(i64 p, int e) {
  i64 r = 1;
  for (int i = 0; i < std::abs(e); ++i) r *= p;
  return e >= 0 ? Rational(r) : Rational(1, r);
}

// 24 prod_{p | N} p^2/(p^2 - 1)
inline Rational euler_constant(const LevelContext& ctx) {
  Rational c(24);
  for (const auto& f : ctx.factorization.factors) c *= Rational(f.prime * f.prime, f.prime * f.prime - 1);
  return c;
}

inline Rational local_coefficient(bool at_inf, i64 p, int k, int a) {
  if (k == 0) return sigma_prime_power(p, a);
  if (at_inf) return sigma_prime_power(p, a - k) - Rational(1, p * p) * sigma_prime_power(p, a - k + 1);
  return rational_pow(p, a - k);
}

}  // namespace detail

// j_{N,n}(rho) from the Euler product of the associated Dirichlet series.
inline Rational j_euler_exact(const LevelContext& ctx, const CuspData& cusp, i64 n) {
  require_eisenstein_cusp(ctx, cusp);
  if (n < 1) throw DomainError("NonPositive", "coefficient index must be >= 1");
  const bool at_inf = cusp.is_infinity();
  const auto fn = factorize(n);
  Rational r = detail::euler_constant(ctx);
  for (const auto& f : ctx.factorization.factors)
    r *= detail::local_coefficient(at_inf, f.prime, f.exponent, fn.ord(f.prime));
  for (const auto& f : fn.factors)
    if (!ctx.factorization.divisible_by_prime(f.prime)) r *= detail::sigma_prime_power(f.prime, f.exponent);
  return r;
}

inline std::vector<Rational> dirichlet_coeffs_from_euler(const LevelContext& ctx, const CuspData& cusp,
                                                         i64 n_max) {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(std::max<i64>(n_max, 0)));
  for (i64 n = 1; n <= n_max; ++n) out.push_back(j_euler_exact(ctx, cusp, n));
  return out;
}

// The published divisor-sum closed form, taken literally.
inline Rational j_closed_exact(const LevelContext& ctx, const CuspData& cusp, i64 n) {
  require_eisenstein_cusp(ctx, cusp);
  if (n < 1) throw DomainError("NonPositive", "coefficient index must be >= 1");
  const i64 N = ctx.N;
  Rational pre = detail::euler_constant(ctx) / 24;
  if (cusp.is_infinity()) {
    const i64 g = gcd(n, N);
    Rational inner(0);
    for (i64 d : divisors(gcd(N, n / g))) inner += Rational(mobius(d), d * d) * Rational(sigma(n * d / g));
    return Rational(24, N * N) * pre * Rational(mobius(N / g) * g * g) * inner;
  }
  const auto [n1, n2] = split_coprime(n, N);
  return Rational(24, N) * pre * Rational(n2) * Rational(sigma(n1));
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// |j_{N,m}(rho)| <= (2 pi^4 / (3 ell)) sigma(m) <= (2 pi^4 / (3 ell)) m (1 + log m).
inline double j_coefficient_majorant(double m, double ell) {
  return 2.0 * std::pow(kPi, 4) / (3.0 * ell) * m * (1.0 + std::log(std::max(m, 1.0)));
}

// -------------------------------------------------------------- series routes

// sum over admissible c <= C of K_{inf,rho}(m, n; c)/c^2.
inline ApproxValue a_rho(const LevelContext& ctx, const CuspData& cusp, i64 m, i64 n,
                         const TruncationPolicy& pol, KloostermanCache* cache = nullptr) {
  if (cusp.N != ctx.N) throw DomainError("InvalidCusp", "cusp does not belong to this level");
  if (m == 0 && n == 0) throw DomainError("Precondition", "a_rho needs (m, n) != (0, 0)");
  const i64 C = pol.c_max;
  const bool simple = cusp.is_infinity() || is_zero_cusp(cusp);
  std::vector<int> mu;
  if (simple && n == 0) mu = mobius_table(C);
  KloostermanCache local;
  KloostermanCache& kc = cache ? *cache : local;

  struct Acc {
    ComplexSum s;
    double last = 0.0;
  };
  auto chunk = [&](long lo, long hi) {
    Acc a;
    for (i64 c = lo; c < hi; ++c) {
      if (!kloosterman_admissible(cusp, c)) continue;
      cplx k;
      if (simple && n == 0)
        k = static_cast<double>(ramanujan_sum(c, m, mu));
      else
        k = kc.get(cusp, m, n, c).value;
      const cplx t = k / (static_cast<double>(c) * static_cast<double>(c));
      a.s.add(t);
      a.last = std::abs(t);
    }
    return a;
  };
  const Acc total = chunked_reduce<Acc>(1, C + 1, 4096, pol.threads, chunk, [](Acc& t, const Acc& p) {
    t.s.add(p.s);
    if (p.last != 0.0) t.last = p.last;
  });
  ApproxValue r;
  r.value = total.s.value();
  const double g = static_cast<double>(std::max(std::abs(m), std::abs(n)));
  if (pol.tail_mode == TailMode::weil_rigorous && simple && n == 0 && C >= std::abs(m)) {
    // |c_c(m)| <= gcd(c, m), so the tail is at most 2 tau(m)/C
    r.err = 2.0 * static_cast<double>(num_divisors(std::abs(m))) / static_cast<double>(C);
  } else if (pol.tail_mode == TailMode::weil_rigorous && simple) {
    r.err = std::sqrt(g) * divisor_tail_bound(static_cast<double>(C));
    r.rigorous = true;
  } else {
    r.err = 10.0 * total.last;
    r.rigorous = false;
  }
  r.err += 4.0 * kEps * static_cast<double>(C) * std::abs(r.value);
  return r;
}

namespace detail {

// (4 pi^2 n / ell) sum_c K_{inf,rho}(n, 0; c)/c^2 with Ramanujan sums.
inline ApproxValue j_series(const LevelContext& ctx, const CuspData& cusp, i64 n, const TruncationPolicy& pol) {
  const i64 C = pol.c_max, N = ctx.N;
  const bool at_inf = cusp.is_infinity();
  const auto mu = mobius_table(C);
  struct Acc {
    NeumaierSum s;
    double last = 0.0;
  };
  auto chunk = [&](long lo, long hi) {
    Acc a;
    for (i64 c = lo; c < hi; ++c) {
      if (at_inf ? (c % N != 0) : (gcd(c, N) != 1)) continue;
      const double t = static_cast<double>(ramanujan_sum(c, n, mu)) / (static_cast<double>(c) * c);
      a.s.add(t);
      a.last = std::abs(t);
    }
    return a;
  };
  const Acc total = chunked_reduce<Acc>(1, C + 1, 8192, pol.threads, chunk, [](Acc& t, const Acc& p) {
    t.s.add(p.s.value());
    if (p.last != 0.0) t.last = p.last;
  });
  const double ell = static_cast<double>(cusp.width);
  const double pre = 4.0 * kPi * kPi * static_cast<double>(n) / ell;
  ApproxValue r;
  r.value = pre * total.s.value();
  if (pol.tail_mode == TailMode::weil_rigorous && C >= n) {
    // sum_{c > C} gcd(c, n)/c^2 <= 2 tau(n)/C
    r.err = pre * 2.0 * static_cast<double>(num_divisors(n)) / static_cast<double>(C);
  } else {
    r.err = pre * 10.0 * total.last;
    r.rigorous = false;
  }
  r.err += 4.0 * kEps * std::abs(r.value);
  return r;
}

}  // namespace detail

inline ApproxValue j_coeff(const LevelContext& ctx, const CuspData& cusp, i64 n, JMethod method,
                           const TruncationPolicy& pol = {}) {
  require_eisenstein_cusp(ctx, cusp);
  if (n < 1) throw DomainError("NonPositive", "coefficient index must be >= 1");
  if (method == JMethod::series) return detail::j_series(ctx, cusp, n, pol);
  ApproxValue r;
  r.value = to_double(method == JMethod::euler ? j_euler_exact(ctx, cusp, n) : j_closed_exact(ctx, cusp, n));
  r.err = 0.0;
  return r;
}

// ------------------------------------------------------- Eisenstein evaluation

// H_{N,rho}(it) = 3/(index pi t) - [rho = inf] + sum_m j_{N,m}(rho) e^{-2 pi m t}.
inline ApproxValue eval_H_eisenstein(const LevelContext& ctx, const CuspData& cusp, double t,
                                     const TruncationPolicy& pol = {}) {
  require_eisenstein_cusp(ctx, cusp);
  if (!(t > 0.0)) throw DomainError("NonpositiveT", "t must be > 0");
  const i64 M = std::max<i64>(pol.m_max, 1);
  NeumaierSum s;
  double absum = 0.0;
  for (i64 m = M; m >= 1; --m) {
    const double e = std::exp(-kTwoPi * static_cast<double>(m) * t);
    if (e == 0.0) continue;
    const double term = to_double(j_euler_exact(ctx, cusp, m)) * e;
    s.add(term);
    absum += std::abs(term);
  }
  const double lead = 3.0 / (ctx.index0() * kPi * t);
  const double delta = cusp.is_infinity() ? 1.0 : 0.0;
  s.add(lead);
  s.add(-delta);
  ApproxValue r;
  r.value = s.value();
  // tail: sum_{m > M} majorant(m) e^{-2 pi m t}, dominated by a geometric series once the ratio is < 1
  double tail = 0.0;
  const double q = std::exp(-kTwoPi * t);
  for (i64 m = M + 1; m <= M + 100000; ++m) {
    const double term = j_coefficient_majorant(static_cast<double>(m), 1.0) * std::pow(q, static_cast<double>(m));
    const double ratio = j_coefficient_majorant(m + 1.0, 1.0) / j_coefficient_majorant(static_cast<double>(m), 1.0) * q;
    if (ratio < 0.5) {
      tail += term / (1.0 - ratio);
      break;
    }
    tail += term;
  }
  r.err = tail + 4.0 * kEps * (absum + lead + delta + std::abs(r.value));
  return r;
}

// ------------------------------------------------------------ orbit guards

// Re((a z + b)/(c z + d)) for some (a b; c d) with the given bottom row.
inline double real_part_of_image(i64 c, i64 d, cplx z) {
  i64 a = 0, b = 0;
  if (c == 0) {
    a = d;
    b = 0;
  } else {
    // a d - b c = 1
    const i64 ad = mod_inverse(mod(d, std::abs(c)), std::abs(c));
    a = ad;
    b = (a * d - 1) / c;
  }
  const double x = z.real(), n2 = std::norm(z);
  const double ac = static_cast<double>(a) * c, bd = static_cast<double>(b) * d;
  const double num = ac * n2 + (static_cast<double>(a) * d + static_cast<double>(b) * c) * x + bd;
  return num / std::norm(static_cast<double>(c) * z + static_cast<double>(d));
}

struct OrbitGuardResult {
  bool hit = false;
  i64 c = 0, d = 0;
  double distance = 0.0;
};

// Looks for gamma in Gamma0(N) with c^2 + d^2 <= bound and Re(gamma z) within delta of an integer.
inline OrbitGuardResult imaginary_axis_guard(i64 N, cplx z, i64 bound = 2500, double delta = 1e-9) {
  OrbitGuardResult best;
  best.distance = 1.0;
  const i64 cmax = static_cast<i64>(std::sqrt(static_cast<double>(bound)));
  for (i64 c = 0; c <= cmax; c += N) {
    for (i64 d = -cmax; d <= cmax; ++d) {
      if (c * c + d * d > bound || gcd(c, std::abs(d)) != 1) continue;
      if (c == 0 && d != 1) continue;
      const double re = real_part_of_image(c, d, z);
      const double dist = distance_to_integer(re);
      if (dist < best.distance) {
        best.distance = dist;
        best.c = c;
        best.d = d;
      }
    }
    if (N == 0) break;
  }
  best.hit = best.distance < delta;
  return best;
}

// -------------------------------------------------------------- Bessel blocks

// Weight w_m = mant[m-1] * exp(logscale[m-1]) attached to the m-th Fourier mode.
struct ModeWeights {
  std::vector<cplx> mant;
  std::vector<double> logscale;
};

struct BesselBlockResult {
  cplx sum_i{0.0, 0.0};  // sum sqrt(m/n) w_m e^{2 pi i n z}  sum_c K(m,-n;c)/c I1(X/c)
  cplx sum_j{0.0, 0.0};  // sum sqrt(m/n) w_m e^{-2 pi i n zbar} sum_c K(m,n;c)/c J1(X/c)
  double err = 0.0;
  bool rigorous = true;
  long pairs = 0;
  i64 c_used = 0;
};

namespace detail {

struct BesselPair {
  i64 m, n;
  double X1, base;  // X1 = 4 pi sqrt(mn/ell); base = logscale_m - 2 pi n y + log sqrt(m/n)
  double absw;
  double sqrt_g;
  i64 cut;
  ComplexSum si, sj;
};

inline i64 smallest_admissible(const CuspData& cusp) {
  for (i64 c = 1;; ++c)
    if (kloosterman_admissible(cusp, c)) return c;
}

// Unit residues mod c, their inverses and the c-th roots of unity.
struct UnitTable {
  std::vector<i64> d, dinv;
  std::vector<cplx> roots;
  explicit UnitTable(i64 c) {
    roots.resize(static_cast<std::size_t>(c));
    roots[0] = 1.0;
    const double step = kTwoPi / static_cast<double>(c);
    for (i64 k = 1; 2 * k <= c; ++k) {
      roots[k] = {std::cos(step * k), std::sin(step * k)};
      roots[c - k] = std::conj(roots[k]);
    }
    if (c == 1) {
      d = {0};
      dinv = {0};
      return;
    }
    std::vector<char> unit(static_cast<std::size_t>(c), 1);
    for (const auto& f : factorize(c).factors)
      for (i64 k = 0; k < c; k += f.prime) unit[k] = 0;
    for (i64 u = 1; u < c; ++u)
      if (unit[u]) d.push_back(u);
    // batch inversion from prefix products: one extended Euclid per modulus
    const std::size_t k = d.size();
    std::vector<i64> pre(k);
    i64 acc = 1;
    for (std::size_t i = 0; i < k; ++i) {
      pre[i] = acc;
      acc = acc * d[i] % c;
    }
    i64 inv = mod_inverse(acc, c);
    dinv.resize(k);
    for (std::size_t i = k; i-- > 0;) {
      dinv[i] = inv * pre[i] % c;
      inv = inv * d[i] % c;
    }
  }
};

}  // namespace detail

// The (m, n, c) Bessel double sums of the point expansion at i-infinity or at
// another cusp of width ell. Coefficient prefactors are applied by the caller.
inline BesselBlockResult bessel_block(const LevelContext& ctx, const CuspData& cusp, cplx z, const ModeWeights& w,
                                      const TruncationPolicy& pol, double tol_abs) {
  const double y = z.imag(), x = z.real();
  const double ell = static_cast<double>(cusp.width);
  const i64 M = static_cast<i64>(w.mant.size());
  const i64 c_min = detail::smallest_admissible(cusp);
  const bool simple = cusp.is_infinity() || is_zero_cusp(cusp);
  const double cap = static_cast<double>(std::max(pol.c_max, c_min));
  const double log_cap = std::log(cap);

  BesselBlockResult out;
  out.rigorous = simple;
  const double tol_pair = tol_abs * 1e-2;
  std::vector<detail::BesselPair> pairs;
  double skipped = 0.0, edge = 0.0;

  // computed in the log domain: e^{X1/c_min} alone overflows for large m n
  auto pair_bound = [&](i64 m, i64 n, double logw) {
    const double X1 = 4.0 * kPi * std::sqrt(static_cast<double>(m) * n / ell);
    const double base = logw - kTwoPi * n * y + 0.5 * std::log(static_cast<double>(m) / n);
    const double g = static_cast<double>(gcd(m, n));
    const double lead = X1 / c_min + std::log1p(log_cap);
    const double logbody = std::log(X1) + lead + std::log1p(0.5652 * divisor_tail_bound(cap) * std::exp(-lead));
    return std::exp(base + 0.5 * std::log(g) + logbody);
  };

  for (i64 m = 1; m <= M; ++m) {
    const double logw = w.logscale[m - 1] + std::log(std::max(std::abs(w.mant[m - 1]), 1e-300));
    for (i64 n = 1; n <= pol.n_max; ++n) {
      const double B = pair_bound(m, n, logw);
      if (!(B > tol_pair)) {
        skipped += B;
        if (n > 1 && pair_bound(m, n - 1, logw) <= B) continue;
        if (n > 4 * y + 8) {
          // bound is decreasing in n from here on: the remaining terms form a fast-decaying tail
          edge += B * static_cast<double>(pol.n_max - n);
          break;
        }
        continue;
      }
      detail::BesselPair p;
      p.m = m;
      p.n = n;
      p.X1 = 4.0 * kPi * std::sqrt(static_cast<double>(m) * n / ell);
      p.base = w.logscale[m - 1] - kTwoPi * n * y + 0.5 * std::log(static_cast<double>(m) / n);
      p.absw = std::abs(w.mant[m - 1]);
      p.sqrt_g = std::sqrt(static_cast<double>(gcd(m, n)));
      // c beyond which the remaining c-tail is below tol_pair
      const double pref = std::exp(p.base) * p.absw * 0.5652 * p.X1 * p.sqrt_g;
      double lo = std::max(p.X1, static_cast<double>(c_min)), hi = cap;
      if (pref * divisor_tail_bound(hi) > tol_pair) {
        lo = hi;
      } else {
        for (int it = 0; it < 60 && hi - lo > 1.0; ++it) {
          const double mid = 0.5 * (lo + hi);
          (pref * divisor_tail_bound(mid) > tol_pair ? lo : hi) = mid;
        }
        lo = hi;
      }
      p.cut = static_cast<i64>(std::ceil(lo));
      pairs.push_back(std::move(p));
    }
    if (pol.n_max >= 1) {
      const double Bm = pair_bound(m, pol.n_max + 1, logw);
      edge += Bm;
    }
  }
  // trailing m beyond the supplied weights are the caller's responsibility
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return a.cut != b.cut ? a.cut > b.cut : (a.m != b.m ? a.m < b.m : a.n < b.n);
  });
  const i64 c_top = pairs.empty() ? 0 : pairs.front().cut;
  const i64 Nctx = ctx.N;
  for (i64 c = c_min; c <= c_top; ++c) {
    if (!kloosterman_admissible(cusp, c)) continue;
    std::size_t active = 0;
    while (active < pairs.size() && pairs[active].cut >= c) ++active;
    if (active == 0) break;
    std::optional<detail::UnitTable> table;
    if (simple) table.emplace(c);
    const i64 ninv = (simple && !cusp.is_infinity() && c > 1) ? mod_inverse(Nctx, c) : 1;
    for (std::size_t k = 0; k < active; ++k) {
      auto& p = pairs[k];
      cplx kminus, kplus;
      if (simple) {
        const i64 mm = mulmod(p.m, ninv, c), nn = mod(p.n, c);
        for (std::size_t u = 0; u < table->d.size(); ++u) {
          const i64 a = (mm * table->d[u]) % c, b = (nn * table->dinv[u]) % c;
          kminus += table->roots[(a - b + c) % c];
          kplus += table->roots[(a + b) % c];
        }
      } else {
        kminus = gen_kloosterman_direct(cusp, p.m, -p.n, c).value;
        kplus = gen_kloosterman_direct(cusp, p.m, p.n, c).value;
      }
      const double X = p.X1 / static_cast<double>(c);
      const double cd = static_cast<double>(c);
      const double ei = std::exp(p.base + X) * bessel_i1_scaled(X) / cd;
      const double ej = std::exp(p.base) * bessel(BesselKind::J1, X) / cd;
      p.si.add(kminus * ei);
      p.sj.add(kplus * ej);
    }
    out.c_used = c;
  }
  ComplexSum si, sj;
  double tails = 0.0;
  for (auto& p : pairs) {
    const double ph = 2.0 * std::fmod(static_cast<double>(p.n) * x, 1.0);
    const cplx ez{boost::math::cos_pi(ph), boost::math::sin_pi(ph)};
    const cplx wm = w.mant[p.m - 1];
    si.add(p.si.value() * ez * wm);
    sj.add(p.sj.value() * std::conj(ez) * wm);
    tails += std::exp(p.base) * p.absw * 0.5652 * p.X1 * p.sqrt_g * divisor_tail_bound(static_cast<double>(p.cut));
  }
  out.sum_i = si.value();
  out.sum_j = sj.value();
  out.pairs = static_cast<long>(pairs.size());
  out.err = 2.0 * (tails + skipped + edge) + 1e-14 * (std::abs(out.sum_i) + std::abs(out.sum_j));
  if (edge > tol_abs) out.rigorous = false;
  return out;
}

// ------------------------------------------------------------ point evaluation

struct BesselSigns {
  double i_inf = 1.0, j_inf = 1.0;      // i-infinity expansion
  double i_cusp = 1.0, j_cusp = 1.0;    // other cusps
};

struct PointEvalRequest {
  LevelContext ctx;
  cplx z{0.0, 1.0};
  cplx tau{0.0, 2.0};
  CuspData cusp;
  TruncationPolicy policy;
  bool relaxed = false;  // only require Im tau > 1/Im z
  BesselSigns signs;
};

inline ApproxValue eval_H_star(const PointEvalRequest& req) {
  const auto& ctx = req.ctx;
  const auto& cusp = req.cusp;
  if (cusp.N != ctx.N) throw DomainError("InvalidCusp", "cusp does not belong to this level");
  const double y = req.z.imag(), v = req.tau.imag();
  if (!(y > 0.0) || !(v > 0.0)) throw DomainError("Precondition", "z and tau must lie in the upper half-plane");
  const double need = req.relaxed ? 1.0 / y : std::max(y, 1.0 / y);
  if (!(v > need))
    throw DomainError("RegionViolation", "Im tau must exceed " + std::string(req.relaxed ? "1/Im z" : "max(Im z, 1/Im z)"));
  const auto& pol = req.policy;
  const double ell = static_cast<double>(cusp.width);
  const double tol = pol.tol;

  ComplexSum total;
  double err = 0.0;
  bool rigorous = true;
  total.add(3.0 / (ctx.index0() * kPi * v));

  // Fourier modes e^{2 pi i m tau / ell}: stop once they are below tol relative to the majorant
  i64 M = 0;
  for (i64 m = 1; m <= pol.m_max; ++m) {
    M = m;
    if (j_coefficient_majorant(static_cast<double>(m), ell) * std::exp(-kTwoPi * m * v / ell) < tol * 1e-3) break;
  }
  ModeWeights w;
  for (i64 m = 1; m <= M; ++m) {
    const double ph = 2.0 * std::fmod(static_cast<double>(m) * req.tau.real() / ell, 1.0);
    w.mant.emplace_back(boost::math::cos_pi(ph), boost::math::sin_pi(ph));
    w.logscale.push_back(-kTwoPi * static_cast<double>(m) * v / ell);
  }
  // constant-term modes
  if (cusp.is_infinity() || is_zero_cusp(cusp)) {
    for (i64 m = M; m >= 1; --m)
      total.add(to_double(j_euler_exact(ctx, cusp, m)) / ell * w.mant[m - 1] * std::exp(w.logscale[m - 1]));
  } else {
    KloostermanCache kc;
    for (i64 m = M; m >= 1; --m) {
      const auto a = a_rho(ctx, cusp, m, 0, pol, &kc);
      const double pre = 4.0 * kPi * kPi * static_cast<double>(m) / (ell * ell) * std::exp(w.logscale[m - 1]);
      total.add(pre * a.value * w.mant[m - 1]);
      err += pre * a.err;
      rigorous = false;
    }
  }
  {
    const double next = static_cast<double>(M + 1);
    const double r = std::exp(-kTwoPi * v / ell);
    err += j_coefficient_majorant(next, ell) * std::exp(-kTwoPi * next * v / ell) / (1.0 - 2.0 * r) / ell;
  }

  if (cusp.is_infinity()) {
    // sum_m (e^{-2 pi i m z} - e^{-2 pi i m zbar}) q^m, continued through w/(1 - w)
    const cplx I{0.0, 1.0};
    const cplx wz = std::exp(kTwoPi * I * (req.tau - req.z));
    const cplx wzb = std::exp(kTwoPi * I * (req.tau - std::conj(req.z)));
    if (std::abs(1.0 - wz) < 1e-10) throw DomainError("NearPole", "tau is at a translate of z");
    total.add(wz / (1.0 - wz) - wzb / (1.0 - wzb));
  }

  const auto bb = bessel_block(ctx, cusp, req.z, w, pol, tol);
  const double pref = cusp.is_infinity() ? kTwoPi : kTwoPi / std::pow(ell, 1.5);
  const double si = cusp.is_infinity() ? req.signs.i_inf : req.signs.i_cusp;
  const double sj = cusp.is_infinity() ? req.signs.j_inf : req.signs.j_cusp;
  total.add(si * pref * bb.sum_i);
  total.add(sj * pref * bb.sum_j);
  err += pref * bb.err;
  rigorous = rigorous && bb.rigorous;

  ApproxValue out;
  out.value = total.value();
  out.err = err + 8.0 * kEps * (1.0 + std::abs(out.value));
  out.rigorous = rigorous;
  return out;
}

}  // namespace phmf
