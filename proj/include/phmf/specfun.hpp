#pragma once

// Complex special functions: Bessel I1/J1, gamma, upper incomplete gamma,
// zeta, polylogarithms on the unit circle, M(1, s+1, -c) and falling factorials.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "arith.hpp"

namespace phmf {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;

enum class EvalMethod {
  exact,
  power_series,
  asymptotic,
  backward_recurrence,
  lanczos,
  reflection,
  continued_fraction,
  series_complement,
  integer_recurrence,
  underflow,
  borwein_eta,
  closed_form,
  log_series,
  poisson_series,
};

inline const char* to_string(EvalMethod m) {
  switch (m) {
    case EvalMethod::exact: return "exact";
    case EvalMethod::power_series: return "power_series";
    case EvalMethod::asymptotic: return "asymptotic";
    case EvalMethod::backward_recurrence: return "backward_recurrence";
    case EvalMethod::lanczos: return "lanczos";
    case EvalMethod::reflection: return "reflection";
    case EvalMethod::continued_fraction: return "continued_fraction";
    case EvalMethod::series_complement: return "series_complement";
    case EvalMethod::integer_recurrence: return "integer_recurrence";
    case EvalMethod::underflow: return "underflow";
    case EvalMethod::borwein_eta: return "borwein_eta";
    case EvalMethod::closed_form: return "closed_form";
    case EvalMethod::log_series: return "log_series";
    case EvalMethod::poisson_series: return "poisson_series";
  }
  return "unknown";
}

struct ComplexEval {
  cplx value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  EvalMethod method = EvalMethod::exact;
};

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline bool is_nonpositive_integer(cplx s) {
  return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// sin(pi s) and cos(pi s) with exact zeros at integers.
inline cplx sin_pi(cplx s) {
  const double a = s.real(), b = kPi * s.imag();
  return {boost::math::sin_pi(a) * std::cosh(b), boost::math::cos_pi(a) * std::sinh(b)};
}

inline cplx cos_pi(cplx s) {
  const double a = s.real(), b = kPi * s.imag();
  return {boost::math::cos_pi(a) * std::cosh(b), -boost::math::sin_pi(a) * std::sinh(b)};
}

// ---------------------------------------------------------------- Bessel

enum class BesselKind { I1, J1 };

namespace detail {

inline double bessel_series(BesselKind kind, double x) {
  const double h = 0.5 * x, h2 = h * h;
  double term = h, sum = h;
  for (int m = 1; m < 500; ++m) {
    term *= h2 / (static_cast<double>(m) * (m + 1));
    if (kind == BesselKind::J1) term = -term;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Asymptotic coefficient a_k(1) = prod_{i=1..k} (4 - (2i-1)^2) / (k! 8^k).
inline double hankel_coeff_ratio(int k) {
  const double t = 2.0 * k - 1.0;
  return (4.0 - t * t) / (8.0 * k);
}

// e^{-x} I1(x) for large x.
inline double i1_scaled_asymptotic(double x) {
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -hankel_coeff_ratio(k) / x;
    if (std::abs(term) > prev) break;
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(kTwoPi * x);
}

inline double j1_asymptotic(double x) {
  double p = 1.0, q = 0.0, term = 1.0, prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= hankel_coeff_ratio(k) / x;
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    // a_k/x^k enters P with sign (-1)^{k/2} for even k, Q with (-1)^{(k-1)/2} for odd k
    const int r = k % 4;
    if (r == 0) p += term;
    else if (r == 1) q += term;
    else if (r == 2) p -= term;
    else q -= term;
    if (prev < 1e-17) break;
  }
  const double chi = x - 0.75 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Miller backward recurrence normalised by J0 + 2 sum J_2k = 1.
inline double j1_miller(double x) {
  int start = 2 * ((static_cast<int>(x) + 40) / 2);
  double jp1 = 0.0, j = 1e-300, j1 = 0.0, norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm1 = 2.0 * k / x * j - jp1;
    jp1 = j;
    j = jm1;
    if (k - 1 == 1) j1 = j;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0 ? 1.0 : 2.0) * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      j1 *= 1e-250;
      norm *= 1e-250;
    }
  }
  return j1 / norm;
}

}  // namespace detail

inline constexpr double kBesselAsymptoticCut = 30.0;

inline double bessel(BesselKind kind, double x) {
  if (x < 0.0) throw DomainError("Precondition", "bessel: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (kind == BesselKind::I1) {
    if (x <= kBesselAsymptoticCut) return detail::bessel_series(kind, x);
    return std::exp(x) * detail::i1_scaled_asymptotic(x);
  }
  if (x <= 8.0) return detail::bessel_series(kind, x);
  if (x <= kBesselAsymptoticCut) return detail::j1_miller(x);
  return detail::j1_asymptotic(x);
}

// e^{-x} I1(x), finite for all x >= 0.
inline double bessel_i1_scaled(double x) {
  if (x < 0.0) throw DomainError("Precondition", "bessel: x must be >= 0");
  if (x <= kBesselAsymptoticCut) return std::exp(-x) * detail::bessel_series(BesselKind::I1, x);
  return detail::i1_scaled_asymptotic(x);
}

// ---------------------------------------------------------------- Gamma

namespace detail {

inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
inline constexpr double kLanczosG = 7.0;

// log Gamma(s) for Re s >= 1/2.
inline cplx log_gamma_right(cplx s) {
  const cplx z = s - 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(kTwoPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

inline ComplexEval complex_gamma(cplx s) {
  if (is_nonpositive_integer(s))
    throw DomainError("PoleAtNonpositiveInteger", "Gamma has a pole at a nonpositive integer");
  ComplexEval r;
  if (s.imag() == 0.0 && s.real() >= 1.0 && s.real() <= 20.0 && s.real() == std::floor(s.real())) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(s.real()); ++k) f *= k;
    r.value = f;
    r.method = EvalMethod::exact;
    return r;
  }
  if (s.real() >= 0.5) {
    r.value = std::exp(detail::log_gamma_right(s));
    r.method = EvalMethod::lanczos;
  } else {
    r.value = kPi / (sin_pi(s) * std::exp(detail::log_gamma_right(1.0 - s)));
    r.method = EvalMethod::reflection;
  }
  r.abs_error_estimate = 1e-14 * (1.0 + std::abs(s)) * std::abs(r.value);
  return r;
}

inline cplx cgamma(cplx s) { return complex_gamma(s).value; }

inline cplx falling_factorial(cplx a, int j) {
  if (j < 0) throw DomainError("Precondition", "falling_factorial: j must be >= 0");
  cplx r = 1.0;
  for (int i = 0; i < j; ++i) r *= a - static_cast<double>(i);
  return r;
}

inline double harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

// ------------------------------------------------------ incomplete gamma

inline constexpr double kIncGammaUnderflow = 700.0;

namespace detail {

// a^{-s} e^{a} Gamma(s, a) by the Legendre continued fraction (modified Lentz).
inline cplx inc_gamma_cf_core(cplx s, double a) {
  const double tiny = 1e-300;
  cplx b = a + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

// sum_{k>=0} a^k / (s (s+1) ... (s+k)), so gamma(s, a) = a^s e^{-a} * this.
inline cplx lower_gamma_series_core(cplx s, double a) {
  cplx term = 1.0 / s, sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= a / (s + static_cast<double>(k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && static_cast<double>(k) > a) break;
  }
  return sum;
}

// E1(a) = Gamma(0, a).
inline double exp_integral_e1(double a) {
  if (a <= 1.0) {
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -a / k;
      sum += term / k;
      if (std::abs(term) < 1e-18) break;
    }
    return -kEulerGamma - std::log(a) - sum;
  }
  return std::exp(-a) * inc_gamma_cf_core(0.0, a).real();
}

}  // namespace detail

// Gamma(s, a) e^{a}; finite for every a > 0 within double range of a^s.
inline ComplexEval upper_incomplete_gamma_scaled(cplx s, double a) {
  if (!(a > 0.0)) throw DomainError("Precondition", "upper_incomplete_gamma: a must be > 0");
  ComplexEval r;
  if (a >= std::abs(s) + 2.0) {
    r.value = std::exp(s * std::log(a)) * detail::inc_gamma_cf_core(s, a);
    r.method = EvalMethod::continued_fraction;
    r.abs_error_estimate = 1e-15 * (1.0 + std::abs(s)) * std::abs(r.value);
    return r;
  }
  if (is_nonpositive_integer(s)) {
    // Gamma(-n, a) = (a^{-n} e^{-a} - Gamma(1-n, a)) / n, started from E1.
    const int n = static_cast<int>(-s.real());
    double g = detail::exp_integral_e1(a) * std::exp(a);
    for (int k = 1; k <= n; ++k) g = (std::pow(a, -k) - g) / k;
    r.value = g;
    r.method = EvalMethod::integer_recurrence;
    r.abs_error_estimate = 1e-14 * (1.0 + n) * std::abs(g);
    return r;
  }
  const cplx as = std::exp(s * std::log(a));
  const cplx low = as * detail::lower_gamma_series_core(s, a);
  const cplx full = cgamma(s) * std::exp(a);
  r.value = full - low;
  r.method = EvalMethod::series_complement;
  r.abs_error_estimate = 1e-14 * (1.0 + std::abs(s)) * (std::abs(full) + std::abs(low));
  return r;
}

inline ComplexEval upper_incomplete_gamma(cplx s, double a) {
  if (!(a > 0.0)) throw DomainError("Precondition", "upper_incomplete_gamma: a must be > 0");
  if (a > kIncGammaUnderflow && a >= std::abs(s) + 2.0) {
    ComplexEval r;
    r.method = EvalMethod::underflow;
    const double logbound = s.real() * std::log(a) - a + std::log(2.0);
    r.abs_error_estimate = logbound < -745.0 ? 0.0 : std::exp(logbound);
    return r;
  }
  ComplexEval r = upper_incomplete_gamma_scaled(s, a);
  const double ea = std::exp(-a);
  r.value *= ea;
  r.abs_error_estimate *= ea;
  return r;
}

// ---------------------------------------------------------------- zeta

namespace detail {

inline constexpr int kBorweinTerms = 90;

// Borwein's algorithm for eta(s), valid for all s.
inline cplx dirichlet_eta_borwein(cplx s) {
  constexpr int n = kBorweinTerms;
  std::array<double, n + 1> d{};
  double term = 1.0 / n, sum = term;
  d[0] = sum;
  for (int i = 1; i <= n; ++i) {
    term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * (2.0 * i));
    sum += term;
    d[i] = sum;
  }
  for (auto& v : d) v *= n;
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx t = (d[n] - d[k]) * std::exp(-s * std::log(static_cast<double>(k + 1)));
    acc += (k % 2 == 0) ? t : -t;
  }
  return acc / d[n];
}

}  // namespace detail

inline ComplexEval riemann_zeta(cplx s) {
  if (s == cplx(1.0, 0.0)) throw DomainError("PoleAtOne", "zeta has a pole at s = 1");
  ComplexEval r;
  if (s.imag() == 0.0 && s.real() == 0.0) {
    r.value = -0.5;
    r.method = EvalMethod::exact;
    return r;
  }
  if (s.real() >= 0.5) {
    const cplx u = (1.0 - s) * std::log(2.0);
    const cplx denom = std::abs(u) < 1e-3 ? -u * (1.0 + u / 2.0 * (1.0 + u / 3.0 * (1.0 + u / 4.0)))
                                          : 1.0 - std::exp(u);
    r.value = detail::dirichlet_eta_borwein(s) / denom;
    r.method = EvalMethod::borwein_eta;
  } else {
    if (s.imag() == 0.0 && s.real() == std::floor(s.real()) &&
        static_cast<long>(s.real()) % 2 == 0) {
      r.value = 0.0;
      r.method = EvalMethod::exact;
      return r;
    }
    const cplx t = 1.0 - s;
    const cplx zt = detail::dirichlet_eta_borwein(t) / (1.0 - std::exp((1.0 - t) * std::log(2.0)));
    r.value = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi)) * sin_pi(0.5 * s) * cgamma(t) * zt;
    r.method = EvalMethod::reflection;
  }
  r.abs_error_estimate = 1e-14 * (1.0 + std::abs(s)) * std::abs(r.value);
  return r;
}

inline cplx zeta(cplx s) { return riemann_zeta(s).value; }

// ------------------------------------------------------------- polylog

inline constexpr double kPolylogGuard = 1e-6;

// The sign selects the phase: plus gives Li_j(e^{-2 pi i x}), minus gives Li_j(e^{+2 pi i x}).
enum class PhaseSign { plus, minus };

inline double distance_to_integer(double x) { return std::abs(x - std::nearbyint(x)); }

namespace detail {

// zeta(2r) for r = 0..199, built once.
inline double zeta_even(int k) {
  static const std::array<double, 400> table = [] {
    std::array<double, 400> t{};
    t[0] = -0.5;
    for (int r = 2; r < 400; r += 2) t[r] = r < 60 ? zeta(static_cast<double>(r)).real() : 1.0 + std::pow(2.0, -r);
    return t;
  }();
  return table[k];
}

// Li_j(e^mu) for integer j >= 1, |mu| <= pi, mu != 0, via the expansion in mu.
inline cplx polylog_exp(int j, cplx mu) {
  cplx sum = std::pow(mu, j - 1) / std::tgamma(static_cast<double>(j)) * (harmonic(j - 1) - std::log(-mu));
  // k = 0 .. j-2: zeta(j - k) at integers >= 2
  cplx mk = 1.0;
  double kfact = 1.0;
  for (int k = 0; k <= j - 2; ++k) {
    if (k > 0) {
      mk *= mu;
      kfact *= k;
    }
    sum += zeta(static_cast<double>(j - k)).real() * mk / kfact;
  }
  // k = j: zeta(0) = -1/2
  {
    const cplx mj = std::pow(mu, j) / std::tgamma(static_cast<double>(j + 1));
    sum += -0.5 * mj;
  }
  // k = j - 1 + 2r, r >= 1: zeta(1 - 2r) mu^k / k!
  for (int r = 1; r < 200; ++r) {
    const int k = j - 1 + 2 * r;
    // zeta(1 - 2r) = (-1)^r 2 (2r-1)! zeta(2r) / (2 pi)^{2r}
    const double logratio = std::lgamma(2.0 * r) - std::lgamma(k + 1.0) - 2.0 * r * std::log(kTwoPi);
    const double coeff = (r % 2 == 0 ? 2.0 : -2.0) * zeta_even(2 * r) * std::exp(logratio);
    const cplx t = coeff * std::pow(mu, k);
    sum += t;
    if (std::abs(t) < 1e-18 * std::max(1.0, std::abs(sum)) && r > 2) break;
  }
  return sum;
}

}  // namespace detail

inline ComplexEval polylog_unit_circle(int j, double x, PhaseSign sign, double guard = kPolylogGuard) {
  if (j < 1) throw DomainError("Precondition", "polylog: j must be >= 1");
  if (distance_to_integer(x) < guard)
    throw DomainError("TooCloseToSingularity", "polylog: x is within the guard distance of an integer");
  double f = x - std::nearbyint(x);  // in [-1/2, 1/2]
  if (sign == PhaseSign::plus) f = -f;
  ComplexEval r;
  if (j == 1) {
    const cplx z{boost::math::cos_pi(2.0 * f), boost::math::sin_pi(2.0 * f)};
    r.value = -std::log(1.0 - z);
    r.method = EvalMethod::closed_form;
  } else {
    r.value = detail::polylog_exp(j, cplx(0.0, kTwoPi * f));
    r.method = EvalMethod::log_series;
  }
  r.abs_error_estimate = 1e-15 * (1.0 + std::abs(r.value));
  return r;
}

// Partial sum sum_{n<=M} z^n / n^j and its tail bound M^{1-j}/(j-1); test oracle and fallback.
inline ComplexEval polylog_direct_series(int j, double x, PhaseSign sign, long M) {
  if (j < 2) throw DomainError("Precondition", "polylog_direct_series: j must be >= 2");
  const double f = sign == PhaseSign::plus ? -x : x;
  cplx sum = 0.0;
  for (long n = M; n >= 1; --n) {
    const double ph = 2.0 * std::fmod(f * static_cast<double>(n), 1.0);
    sum += cplx(boost::math::cos_pi(ph), boost::math::sin_pi(ph)) * std::pow(static_cast<double>(n), -j);
  }
  ComplexEval r;
  r.value = sum;
  r.method = EvalMethod::power_series;
  r.abs_error_estimate = std::pow(static_cast<double>(M), 1.0 - j) / (j - 1);
  return r;
}

// ---------------------------------------------------------------- Kummer

inline constexpr double kKummerAsymptoticCut = 100.0;

// M(1, s+1, -c).
inline ComplexEval kummer_M1(cplx s, double c) {
  if (is_nonpositive_integer(s + 1.0))
    throw DomainError("PoleOfKummer", "M(1, s+1, .) has a pole when s+1 is a nonpositive integer");
  if (c < 0.0) throw DomainError("Precondition", "kummer_M1: c must be >= 0");
  ComplexEval r;
  if (c == 0.0) {
    r.value = 1.0;
    r.method = EvalMethod::exact;
    return r;
  }
  if (c < kKummerAsymptoticCut || std::abs(s) > 0.25 * c) {
    // Kummer transformation: M(1, s+1, -c) = e^{-c} sum_k s/(s+k) c^k/k!
    // The Poisson weights are accumulated scaled by e^{-c} to avoid overflow.
    const double logc = std::log(c);
    cplx sum = 0.0;
    double maxterm = 0.0;
    const long kmax = static_cast<long>(c + 40.0 * std::sqrt(c + 1.0) + 60.0);
    for (long k = 0; k <= kmax; ++k) {
      const double w = std::exp(k * logc - c - std::lgamma(k + 1.0));
      const cplx t = w * s / (s + static_cast<double>(k));
      sum += t;
      maxterm = std::max(maxterm, std::abs(t));
      if (static_cast<double>(k) > c && w < 1e-18 * std::abs(sum)) break;
    }
    r.value = sum;
    r.method = EvalMethod::poisson_series;
    r.abs_error_estimate = 1e-15 * (kmax + 1.0) * maxterm;
    return r;
  }
  // (s/c) sum_j (-1)^j (s-1)_j / c^j, falling factorial, up to an O(e^{-c}) remainder.
  cplx term = 1.0, sum = 1.0;
  double prev = 1.0;
  for (int j = 1; j < 400; ++j) {
    term *= -(s - static_cast<double>(j)) / c;
    const double a = std::abs(term);
    if (a > prev) break;
    sum += term;
    prev = a;
    if (a < 1e-17 * std::abs(sum)) break;
  }
  r.value = s / c * sum;
  r.method = EvalMethod::asymptotic;
  r.abs_error_estimate = std::abs(s / c) * (prev + 1e-16 * std::abs(sum));
  return r;
}

}  // namespace phmf
