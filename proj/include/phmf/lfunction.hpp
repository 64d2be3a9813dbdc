#pragma once

// L-functions attached to H_{N,rho} and H*_{N,z}: closed forms, the Mellin
// route with a cut at t0, the limit corrections as Im z grows, and the
// functional-equation residuals.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fourier.hpp"

namespace phmf {

// --------------------------------------------------------------- closed forms

namespace detail {

// 1 - p^{u}, accurate when u is small.
inline cplx one_minus_pow(double p, cplx u) {
  const cplx a = u * std::log(p);
  if (std::abs(a) < 1e-3) return -a * (1.0 + a / 2.0 * (1.0 + a / 3.0 * (1.0 + a / 4.0)));
  return 1.0 - std::exp(a);
}

}  // namespace detail

inline cplx local_factor(const LevelContext& ctx, const CuspData& cusp, i64 p, cplx s) {
  require_eisenstein_cusp(ctx, cusp);
  const cplx a = detail::one_minus_pow(static_cast<double>(p), -s);
  const cplx b = detail::one_minus_pow(static_cast<double>(p), 1.0 - s);
  const int k = ctx.factorization.ord(p);
  if (k > 0 && is_zero_cusp(cusp)) {
    if (std::abs(b) == 0.0) throw DomainError("LocalFactorPole", "local factor has a pole at this s");
    return std::pow(static_cast<double>(p), -k) / ((1.0 - 1.0 / (p * p)) * b);
  }
  if (std::abs(a) == 0.0 || std::abs(b) == 0.0)
    throw DomainError("LocalFactorPole", "local factor has a pole at this s");
  if (k == 0) return 1.0 / (a * b);
  const cplx pk = std::exp(-s * (k * std::log(static_cast<double>(p))));
  return pk * detail::one_minus_pow(static_cast<double>(p), s - 2.0) / ((1.0 - 1.0 / (p * p)) * a * b);
}

struct SingularPoints {
  std::vector<cplx> poles, removable;
};

inline SingularPoints closed_singularities(const LevelContext& ctx, const CuspData& cusp, cplx s) {
  SingularPoints sp;
  const bool inf = cusp.is_infinity();
  sp.poles.push_back(1.0);
  if (ctx.N == 1) {
    sp.poles.push_back(0.0);
    sp.poles.push_back(2.0);
  } else if (inf) {
    sp.poles.push_back(0.0);
    sp.removable.push_back(2.0);
  } else {
    sp.poles.push_back(2.0);
    sp.removable.push_back(0.0);
  }
  const double k = std::nearbyint(s.real());
  if (k <= -1.0) sp.removable.push_back(k);
  return sp;
}

namespace detail {

inline cplx L_closed_raw(const LevelContext& ctx, const CuspData& cusp, cplx s) {
  cplx f = 1.0;
  if (ctx.N > 1) {
    for (const auto& pp : ctx.factorization.factors) {
      const double p = static_cast<double>(pp.prime);
      const double e = 1.0 - 1.0 / (p * p);
      if (cusp.is_infinity())
        f *= one_minus_pow(p, s - 2.0) / e;
      else
        f *= one_minus_pow(p, -s) / e;
    }
    f *= cusp.is_infinity() ? std::exp(-s * std::log(static_cast<double>(ctx.N))) : cplx(1.0 / ctx.N);
  }
  return 24.0 * std::exp(-s * std::log(kTwoPi)) * cgamma(s) * zeta(s) * zeta(s - 1.0) * f;
}

}  // namespace detail

inline constexpr double kRemovableRadius = 1e-3;
inline constexpr double kCircleRadius = 2e-3;

// 24 (2 pi)^{-s} Gamma(s) zeta(s) zeta(s-1) times the level factor of the cusp.
inline ApproxValue L_closed(const LevelContext& ctx, const CuspData& cusp, cplx s) {
  require_eisenstein_cusp(ctx, cusp);
  const auto sp = closed_singularities(ctx, cusp, s);
  for (const auto& p : sp.poles)
    if (std::abs(s - p) < 1e-12) throw DomainError("PoleOfL", "L has a pole at this s");
  ApproxValue r;
  for (const auto& q : sp.removable) {
    if (std::abs(s - q) < kRemovableRadius) {
      cplx acc = 0.0;
      const cplx I{0.0, 1.0};
      cplx rot = 1.0;
      for (int k = 0; k < 4; ++k, rot *= I) acc += detail::L_closed_raw(ctx, cusp, s + kCircleRadius * rot);
      r.value = acc / 4.0;
      r.err = 1e-10 * std::abs(r.value) + 1e-13;
      r.rigorous = false;
      return r;
    }
  }
  r.value = detail::L_closed_raw(ctx, cusp, s);
  r.err = 1e-13 * (1.0 + std::abs(s)) * std::abs(r.value);
  r.rigorous = false;
  return r;
}

// --------------------------------------------------------------- Mellin pieces

// ell^{s-1} sum_m j_{N,m}(rho) Gamma(s, 2 pi m T/ell) / (2 pi m)^s
inline ApproxValue mellin_constant_piece(const LevelContext& ctx, const CuspData& cusp, cplx s, double T,
                                         const TruncationPolicy& pol) {
  if (!(T > 0.0)) throw DomainError("Precondition", "cut point must be > 0");
  const double ell = static_cast<double>(cusp.width);
  ComplexSum sum;
  double absum = 0.0, err = 0.0;
  const i64 M = std::max<i64>(pol.m_max, 1);
  i64 m_used = 0;
  for (i64 m = 1; m <= M; ++m) {
    const double a = kTwoPi * static_cast<double>(m) * T / ell;
    const auto g = upper_incomplete_gamma(s, a);
    const cplx t = to_double(j_euler_exact(ctx, cusp, m)) * g.value *
                   std::exp(-s * std::log(kTwoPi * static_cast<double>(m)));
    sum.add(t);
    absum += std::abs(t);
    err += std::abs(g.abs_error_estimate) * std::abs(t) / std::max(std::abs(g.value), 1e-300);
    m_used = m;
    if (a > 50.0 + std::abs(s) && std::abs(t) < 1e-18 * absum) break;
  }
  // majorant tail beyond the last mode
  for (i64 m = m_used + 1; m <= m_used + 10000; ++m) {
    const double a = kTwoPi * static_cast<double>(m) * T / ell;
    const double g = std::abs(upper_incomplete_gamma(s.real(), a).value);
    const double t = j_coefficient_majorant(static_cast<double>(m), ell) * g *
                     std::pow(kTwoPi * static_cast<double>(m), -s.real()) * std::exp(std::abs(s.imag()) * kPi / 2);
    err += t;
    if (t < 1e-30 || t < 1e-20 * absum) break;
  }
  const cplx pre = std::exp((s - 1.0) * std::log(ell));
  ApproxValue r;
  r.value = pre * sum.value();
  r.err = std::abs(pre) * (err + 1e-15 * absum);
  return r;
}

// The Bessel pieces a_2 I^(2) + a_3 I^(3) at cusp rho with cut T.
inline ApproxValue mellin_bessel_piece(const LevelContext& ctx, const CuspData& cusp, cplx z, cplx s, double T,
                                       const TruncationPolicy& pol) {
  const double ell = static_cast<double>(cusp.width);
  ModeWeights w;
  for (i64 m = 1; m <= pol.m_max; ++m) {
    const double a = kTwoPi * static_cast<double>(m) * T / ell;
    const double lr = std::log(ell / (kTwoPi * static_cast<double>(m)));
    const cplx g = upper_incomplete_gamma_scaled(s, a).value;
    w.mant.push_back(std::exp(cplx(0.0, s.imag() * lr)) * g);
    w.logscale.push_back(s.real() * lr - a);
    if (s.real() * lr - a + std::log(std::abs(g) + 1e-300) < -800.0) break;
  }
  const auto bb = bessel_block(ctx, cusp, z, w, pol, pol.tol);
  const double pref = cusp.is_infinity() ? kTwoPi : kTwoPi / std::pow(ell, 1.5);
  ApproxValue r;
  r.value = pref * (bb.sum_i + bb.sum_j);
  r.err = pref * bb.err;
  r.rigorous = bb.rigorous;
  return r;
}

// I^(4)(s, z; T) = int_T^oo t^{s-1} (1/(e^{2 pi (t + i z)} - 1) - 1/(e^{2 pi (t + i zbar)} - 1)) dt
// split as lead + sum_j poly[j-1] + rest, where lead = -y^s/s and
// poly[j-1] = (s-1)_{j-1} y^{s-j}/(2 pi)^j (Li_j(e(-x)) + (-1)^j Li_j(e(x))).
struct I4Parts {
  cplx lead{0.0, 0.0};
  std::vector<cplx> poly;
  cplx rest{0.0, 0.0};
  double err = 0.0;
  bool split = true;

  cplx total() const {
    cplx t = lead + rest;
    for (const auto& p : poly) t += p;
    return t;
  }
};

namespace detail {

// int_T^y t^{s-1} e^{-b (y - t)} dt
inline cplx damped_power_integral(cplx s, double b, double T, double y) {
  const bool integer_like = std::abs(s.imag()) < 1e-12 && std::abs(s.real() - std::nearbyint(s.real())) < 1e-9 &&
                            std::nearbyint(s.real()) <= 0.0;
  if (!integer_like) {
    const cplx hi = std::exp(s * std::log(y)) / s * kummer_M1(s, b * y).value;
    const cplx lo = std::exp(s * std::log(T) - b * (y - T)) / s * kummer_M1(s, b * T).value;
    return hi - lo;
  }
  // u = b (y - t); integrand (y - u/b)^{s-1} e^{-u}/b on [0, b (y - T)]
  const double U = std::min(b * (y - T), 60.0);
  const double sr = s.real();
  auto f = [&](double u) { return std::pow(y - u / b, sr - 1.0) * std::exp(-u) / b; };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, U, 15, 1e-14, &err);
  return v;
}

}  // namespace detail

inline I4Parts mellin_i4(cplx s, cplx z, double T, const TruncationPolicy& pol) {
  const double x = z.real(), y = z.imag();
  if (!(T > 0.0)) throw DomainError("Precondition", "cut point must be > 0");
  I4Parts out;
  const i64 n_cap = std::max<i64>(pol.n_max, 50);
  auto e_of = [](double t) {
    const double ph = 2.0 * (t - std::floor(t));
    return cplx(boost::math::cos_pi(ph), boost::math::sin_pi(ph));
  };

  // zbar part: sum_n e(-n x) e^{-2 pi n y} Gamma(s, 2 pi n T)/(2 pi n)^s
  {
    ComplexSum b;
    for (i64 n = 1; n <= n_cap; ++n) {
      const double bn = kTwoPi * static_cast<double>(n);
      const double ls = -bn * (y + T);
      if (ls < -745.0) break;
      const cplx g = upper_incomplete_gamma_scaled(s, bn * T).value;
      b.add(e_of(-static_cast<double>(n) * x) * std::exp(ls) * g * std::exp(-s * std::log(bn)));
    }
    out.rest -= b.value();
  }

  if (T >= y) {
    if (T - y < 0.05) throw DomainError("RegionViolation", "cut point too close to Im z");
    out.split = false;
    ComplexSum a;
    for (i64 n = 1; n <= 100000; ++n) {
      const double bn = kTwoPi * static_cast<double>(n);
      const double ls = -bn * (T - y);
      if (ls < -745.0) break;
      const cplx g = upper_incomplete_gamma_scaled(s, bn * T).value;
      a.add(e_of(-static_cast<double>(n) * x) * std::exp(ls) * g * std::exp(-s * std::log(bn)));
    }
    out.rest += a.value();
    out.err = 1e-14 * (1.0 + std::abs(out.rest));
    return out;
  }

  const double sr = s.real();
  const int J = std::max(static_cast<int>(std::floor(sr)), 1) + 6;

  // -(y^s - T^s)/s
  if (std::abs(s) > 1e-3) {
    out.lead = -std::exp(s * std::log(y)) / s;
    out.rest += std::exp(s * std::log(T)) / s;
  } else {
    const cplx L = std::log(y / T);
    cplx acc = 0.0, term = L;
    for (int k = 1; k < 30; ++k) {
      acc += term;
      term *= s * L / static_cast<double>(k + 1);
    }
    out.split = false;
    out.rest -= std::exp(s * std::log(T)) * acc;
  }

  // polylog terms j = 1..J
  double perr = 0.0;
  for (int j = 1; j <= J; ++j) {
    const cplx ff = falling_factorial(s - 1.0, j - 1);
    if (ff == 0.0) {
      out.poly.push_back(0.0);
      continue;
    }
    const auto lm = polylog_unit_circle(j, x, PhaseSign::plus);
    const auto lp = polylog_unit_circle(j, x, PhaseSign::minus);
    const cplx pre = ff * std::exp((s - static_cast<double>(j)) * std::log(y)) / std::pow(kTwoPi, j);
    out.poly.push_back(pre * (lm.value + (j % 2 == 0 ? 1.0 : -1.0) * lp.value));
    perr += std::abs(pre) * (lm.abs_error_estimate + lp.abs_error_estimate);
  }

  // remainders of the asymptotic subtraction, plus the T-end boundary terms
  const cplx fJ = falling_factorial(s - 1.0, J);
  ComplexSum rem;
  double rem_abs = 0.0;
  i64 n_used = 0;
  for (i64 n = 1; n <= n_cap; ++n) {
    const double bn = kTwoPi * static_cast<double>(n);
    const cplx en = e_of(static_cast<double>(n) * x);
    cplx t = 0.0;
    if (fJ != 0.0) {
      const cplx hi = fJ * std::conj(en) * upper_incomplete_gamma_scaled(s - static_cast<double>(J), bn * y).value *
                      std::exp(-s * std::log(bn));
      const cplx lo = (J % 2 == 0 ? 1.0 : -1.0) * fJ * en * std::pow(bn, -J) *
                      detail::damped_power_integral(s - static_cast<double>(J), bn, T, y);
      t += hi - lo;
    }
    const double damp = -bn * (y - T);
    if (damp > -745.0) {
      cplx pj = 0.0;
      for (int j = 0; j < J; ++j)
        pj += (j % 2 == 0 ? 1.0 : -1.0) * falling_factorial(s - 1.0, j) *
              std::exp((s - 1.0 - static_cast<double>(j)) * std::log(T)) / std::pow(bn, j + 1);
      t += en * std::exp(damp) * pj;
    }
    rem.add(t);
    rem_abs += std::abs(t);
    n_used = n;
    if (fJ == 0.0 && damp < -745.0) break;
  }
  out.rest += rem.value();
  double tail = 0.0;
  if (fJ != 0.0) {
    // each remainder is O(|(s-1)_J| y^{sr-1-J} (2 pi n)^{-1-J}); bound the n-tail by an integral
    const double scale = std::abs(fJ) * std::pow(y, sr - 1.0 - J) * 4.0;
    tail = scale * std::pow(kTwoPi, -1.0 - J) * std::pow(static_cast<double>(n_used), -J) / J;
  }
  out.err = perr + tail + 1e-15 * (rem_abs + std::abs(out.lead) + std::abs(out.rest));
  return out;
}

// ------------------------------------------------------------- Mellin route

enum class TargetKind { eisenstein, point, fricke_point };

inline const char* to_string(TargetKind k) {
  switch (k) {
    case TargetKind::eisenstein: return "eisenstein";
    case TargetKind::point: return "point";
    case TargetKind::fricke_point: return "fricke_point";
  }
  return "unknown";
}

struct MellinSpec {
  LevelContext ctx;
  TargetKind kind = TargetKind::eisenstein;
  CuspData cusp;          // eisenstein targets
  cplx z{0.0, 3.0};       // point targets
  cplx s{2.0, 0.0};
  std::optional<double> t0;
  TruncationPolicy policy;
  bool skip_guard = false;
};

inline double default_t0(const LevelContext& ctx) { return 1.0 / std::sqrt(static_cast<double>(ctx.N)); }

namespace detail {

inline void require_not(cplx s, cplx p, const char* what) {
  if (std::abs(s - p) < 1e-12) throw DomainError("PoleOfL", what);
}

}  // namespace detail

inline ApproxValue L_mellin_eisenstein(const LevelContext& ctx, const CuspData& cusp, cplx s, double t0,
                                       const TruncationPolicy& pol = {}) {
  require_eisenstein_cusp(ctx, cusp);
  if (!(t0 > 0.0)) throw DomainError("Precondition", "t0 must be > 0");
  detail::require_not(s, 1.0, "L has a pole at s = 1");
  const double cN = ctx.index0();
  const double N = static_cast<double>(ctx.N);
  auto pw = [](double b, cplx e) { return std::exp(e * std::log(b)); };
  ComplexSum acc;
  double err = 0.0;
  acc.add(-(6.0 / (cN * kPi)) * pw(t0, s - 1.0) / (s - 1.0));
  const CuspData inf = cusp_infinity(ctx.N);
  if (ctx.N == 1) {
    detail::require_not(s, 0.0, "L has a pole at s = 0");
    detail::require_not(s, 2.0, "L has a pole at s = 2");
    acc.add(pw(t0, s) / s);
    acc.add(pw(t0, s - 2.0) / (s - 2.0));
    const auto a = mellin_constant_piece(ctx, inf, s, t0, pol);
    const auto b = mellin_constant_piece(ctx, inf, 2.0 - s, 1.0 / t0, pol);
    acc.add(a.value);
    acc.add(-b.value);
    err = a.err + b.err;
  } else if (cusp.is_infinity()) {
    detail::require_not(s, 0.0, "L has a pole at s = 0");
    const CuspData zero = cusp_zero(ctx.N);
    acc.add(pw(t0, s) / s);
    const auto a = mellin_constant_piece(ctx, inf, s, t0, pol);
    const auto b = mellin_constant_piece(ctx, zero, 2.0 - s, 1.0 / t0, pol);
    acc.add(a.value);
    acc.add(-b.value);
    err = a.err + b.err;
  } else {
    detail::require_not(s, 2.0, "L has a pole at s = 2");
    const cplx f = pw(N, 1.0 - s);
    acc.add(pw(t0, s - 2.0) / (N * (s - 2.0)));
    const auto a = mellin_constant_piece(ctx, inf, 2.0 - s, 1.0 / (N * t0), pol);
    const auto b = mellin_constant_piece(ctx, cusp, s, N * t0, pol);
    acc.add(-f * a.value);
    acc.add(f * b.value);
    err = std::abs(f) * (a.err + b.err);
  }
  ApproxValue r;
  r.value = acc.value();
  r.err = err + 1e-15 * (1.0 + std::abs(r.value));
  return r;
}

// Point targets, kept in parts so the limit corrections can be removed exactly.
struct PointLParts {
  cplx rest{0.0, 0.0};
  cplx coef{1.0, 0.0};  // multiplies the I^(4) lead and polylog terms
  I4Parts i4;
  double err = 0.0;
  bool rigorous = true;

  cplx total() const {
    cplx t = rest + coef * i4.lead;
    for (const auto& p : i4.poly) t += coef * p;
    return t;
  }
};

inline void require_point_target(const LevelContext& ctx, cplx z, bool skip_guard) {
  if (!(z.imag() > 2.0)) throw DomainError("Precondition", "point targets need Im z > 2");
  if (skip_guard) return;
  const auto g = imaginary_axis_guard(ctx.N, z);
  if (g.hit)
    throw DomainError("TooCloseToSingularity",
                      "z is Gamma0(N)-equivalent to a point of the imaginary axis (c = " + std::to_string(g.c) +
                          ", d = " + std::to_string(g.d) + ")");
}

inline PointLParts L_point_parts(const LevelContext& ctx, TargetKind kind, cplx z, cplx s, double t0,
                                 const TruncationPolicy& pol, bool skip_guard = false) {
  require_point_target(ctx, z, skip_guard);
  if (!(t0 > 0.0)) throw DomainError("Precondition", "t0 must be > 0");
  detail::require_not(s, 1.0, "L has a pole at s = 1 with residue -6/(index pi)");
  const double y = z.imag();
  const double N = static_cast<double>(ctx.N);
  const double cN = ctx.index0();
  const CuspData inf = cusp_infinity(ctx.N);
  const CuspData zero = ctx.N == 1 ? inf : cusp_zero(ctx.N);
  auto pw = [](double b, cplx e) { return std::exp(e * std::log(b)); };
  PointLParts out;
  ComplexSum acc;
  acc.add(-(6.0 / (cN * kPi)) * pw(t0, s - 1.0) / (s - 1.0));

  auto piece = [&](const CuspData& c, cplx ss, double T, cplx factor) {
    if (!(y * T > 1.0)) throw DomainError("RegionViolation", "the Bessel pieces need Im z * cut > 1");
    const auto a = mellin_constant_piece(ctx, c, ss, T, pol);
    const auto b = mellin_bessel_piece(ctx, c, z, ss, T, pol);
    acc.add(factor * (a.value + b.value));
    out.err += std::abs(factor) * (a.err + b.err);
    out.rigorous = out.rigorous && b.rigorous;
  };

  if (kind == TargetKind::point) {
    piece(inf, s, t0, 1.0);
    piece(zero, 2.0 - s, 1.0 / t0, -1.0);
    out.i4 = mellin_i4(s, z, t0, pol);
    out.coef = 1.0;
  } else if (kind == TargetKind::fricke_point) {
    const cplx f = pw(N, 1.0 - s);
    piece(zero, s, N * t0, f);
    piece(inf, 2.0 - s, 1.0 / (N * t0), -f);
    out.i4 = mellin_i4(2.0 - s, z, 1.0 / (N * t0), pol);
    out.coef = -f;
  } else {
    throw DomainError("Precondition", "L_point_parts needs a point target");
  }
  acc.add(out.coef * out.i4.rest);
  out.err += std::abs(out.coef) * out.i4.err;
  out.rest = acc.value();
  out.err += 1e-15 * (1.0 + std::abs(out.rest));
  return out;
}

inline ApproxValue L_mellin(const MellinSpec& spec) {
  const double t0 = spec.t0.value_or(default_t0(spec.ctx));
  if (spec.kind == TargetKind::eisenstein) return L_mellin_eisenstein(spec.ctx, spec.cusp, spec.s, t0, spec.policy);
  const auto parts = L_point_parts(spec.ctx, spec.kind, spec.z, spec.s, t0, spec.policy, spec.skip_guard);
  ApproxValue r;
  r.value = parts.total();
  r.err = parts.err;
  r.rigorous = parts.rigorous;
  return r;
}

// ------------------------------------------------------------ limit theorems

struct LimitCorrection {
  cplx s{0.0, 0.0};
  double x = 0.0, y = 0.0;
  std::vector<cplx> terms;  // j = 1..floor(Re s)
  cplx leading{0.0, 0.0};   // y^s / s
};

// Correction subtracted from L_{N,z}(s): L + leading - sum(terms) tends to L_{N,inf}(s).
inline LimitCorrection limit_correction(cplx s, double x, double y) {
  if (distance_to_integer(x) < kPolylogGuard)
    throw DomainError("TooCloseToSingularity", "x must stay away from the integers");
  LimitCorrection lc;
  lc.s = s;
  lc.x = x;
  lc.y = y;
  lc.leading = std::exp(s * std::log(y)) / s;
  const int K = static_cast<int>(std::floor(s.real()));
  for (int j = 1; j <= K; ++j) {
    const cplx pre = falling_factorial(s - 1.0, j - 1) * std::exp((s - static_cast<double>(j)) * std::log(y)) /
                     std::pow(kTwoPi, j);
    const cplx lm = polylog_unit_circle(j, x, PhaseSign::plus).value;
    const cplx lp = polylog_unit_circle(j, x, PhaseSign::minus).value;
    lc.terms.push_back(pre * (lm + (j % 2 == 0 ? 1.0 : -1.0) * lp));
  }
  return lc;
}

struct LimitRow {
  double y = 0.0;
  cplx corrected{0.0, 0.0};
  double error = 0.0;  // |corrected - closed|
  double err_bound = 0.0;
};

enum class LimitVariant { point, fricke };

// Corrected values along z = x + i y. The point variant tends to L_{N,inf}(s),
// the Fricke variant to L_{N,0}(s).
inline std::vector<LimitRow> limit_table(const LevelContext& ctx, double x, cplx s, const std::vector<double>& ys,
                                         LimitVariant variant = LimitVariant::point, double t0 = 1.0,
                                         const TruncationPolicy& pol = {}) {
  if (distance_to_integer(x) < kPolylogGuard)
    throw DomainError("TooCloseToSingularity", "x must stay away from the integers");
  const CuspData target = variant == LimitVariant::point ? cusp_infinity(ctx.N)
                                                         : (ctx.N == 1 ? cusp_infinity(1) : cusp_zero(ctx.N));
  const cplx closed = L_closed(ctx, target, s).value;
  const cplx s4 = variant == LimitVariant::point ? s : 2.0 - s;
  const int K = static_cast<int>(std::floor(s4.real()));
  std::vector<LimitRow> rows;
  for (double y : ys) {
    const cplx z{x, y};
    const auto parts = L_point_parts(ctx, variant == LimitVariant::point ? TargetKind::point : TargetKind::fricke_point,
                                     z, s, t0, pol);
    if (!parts.i4.split) throw DomainError("Precondition", "limit table needs the split form of I^(4)");
    cplx corrected = parts.rest;
    for (int j = std::max(K, 0); j < static_cast<int>(parts.i4.poly.size()); ++j)
      corrected += parts.coef * parts.i4.poly[j];
    LimitRow row;
    row.y = y;
    row.corrected = corrected;
    row.error = std::abs(corrected - closed);
    row.err_bound = parts.err;
    rows.push_back(row);
  }
  return rows;
}

// ------------------------------------------------------ functional equations

enum class FuncEqKind { closed, mellin, point };

// |N^{s/2} L_inf(s) + N^{(2-s)/2} L_0(2-s)| for the Eisenstein pair, or the
// analogous residual for L_{N,z} and L_{N,-1/(Nz)}.
inline double funceq_residual(const LevelContext& ctx, cplx s, FuncEqKind kind, cplx z = {0.0, 3.0},
                              const TruncationPolicy& pol = {}, std::optional<double> t0 = std::nullopt) {
  const double N = static_cast<double>(ctx.N);
  const cplx a = std::exp(s / 2.0 * std::log(N)), b = std::exp((2.0 - s) / 2.0 * std::log(N));
  const CuspData inf = cusp_infinity(ctx.N);
  const CuspData zero = ctx.N == 1 ? inf : cusp_zero(ctx.N);
  const double tt = t0.value_or(default_t0(ctx));
  switch (kind) {
    case FuncEqKind::closed:
      return std::abs(a * L_closed(ctx, inf, s).value + b * L_closed(ctx, zero, 2.0 - s).value);
    case FuncEqKind::mellin:
      return std::abs(a * L_mellin_eisenstein(ctx, inf, s, tt, pol).value +
                      b * L_mellin_eisenstein(ctx, zero, 2.0 - s, tt, pol).value);
    case FuncEqKind::point: {
      MellinSpec p;
      p.ctx = ctx;
      p.kind = TargetKind::point;
      p.z = z;
      p.s = s;
      p.t0 = tt;
      p.policy = pol;
      MellinSpec q = p;
      q.kind = TargetKind::fricke_point;
      q.s = 2.0 - s;
      return std::abs(a * L_mellin(p).value + b * L_mellin(q).value);
    }
  }
  return 0.0;
}

// |Gamma(s) (2 pi)^{-s} sum_{n <= n_max} j_n n^{-s} - L_closed(s)| and its tail bound.
struct DirichletCheck {
  cplx partial{0.0, 0.0};
  cplx closed{0.0, 0.0};
  double diff = 0.0;
  double tail = 0.0;
};

inline DirichletCheck dirichlet_check(const LevelContext& ctx, const CuspData& cusp, cplx s, i64 n_max) {
  if (!(s.real() > 2.0)) throw DomainError("Precondition", "the Dirichlet series needs Re s > 2");
  ComplexSum sum;
  for (i64 n = n_max; n >= 1; --n)
    sum.add(to_double(j_euler_exact(ctx, cusp, n)) * std::exp(-s * std::log(static_cast<double>(n))));
  DirichletCheck d;
  const cplx pre = cgamma(s) * std::exp(-s * std::log(kTwoPi));
  d.partial = pre * sum.value();
  d.closed = L_closed(ctx, cusp, s).value;
  d.diff = std::abs(d.partial - d.closed);
  // |j_n| <= (2 pi^4/3) n (1 + log n): tail <= integral of that against n^{-Re s}
  const double sr = s.real(), M = static_cast<double>(n_max);
  d.tail = std::abs(pre) * 2.0 * std::pow(kPi, 4) / 3.0 *
           (std::pow(M, 2.0 - sr) * ((1.0 + std::log(M)) / (sr - 2.0) + 1.0 / ((sr - 2.0) * (sr - 2.0))));
  return d;
}

}  // namespace phmf
