#pragma once

// Cusps alpha/gamma of Gamma0(N), their widths, scaling matrices and the
// ell1/ell2/N1/A1/A2 splitting used by the Kloosterman factorization.

#include <array>
#include <charconv>
#include <string>
#include <string_view>

#include "arith.hpp"

namespace phmf {

using Matrix2 = std::array<i64, 4>;  // (a b; c d) stored row-major

inline i64 det(const Matrix2& m) { return m[0] * m[3] - m[1] * m[2]; }

struct CuspDecomposition {
  i64 ell1 = 1, ell2 = 1, N1 = 1, A1 = 1, A2 = 1;
  bool operator==(const CuspDecomposition&) const = default;
};

struct CuspData {
  i64 N = 1;
  i64 alpha = 1, gamma = 1;
  Matrix2 scaling{1, 0, 0, 1};
  i64 width = 1;
  CuspDecomposition dec;

  i64 delta() const { return scaling[3]; }
  bool is_infinity() const { return gamma == N; }
  bool is_zero() const { return gamma == 1 && N > 1; }
  std::string label() const {
    if (is_infinity()) return "inf";
    if (gamma == 1 && alpha == 0) return "0";
    return std::to_string(alpha) + "/" + std::to_string(gamma);
  }
};

inline void require_divisor(i64 N, i64 gamma) {
  if (N < 1 || gamma < 1 || N % gamma != 0)
    throw DomainError("NotADivisor", "cusp denominator " + std::to_string(gamma) +
                                         " does not divide N = " + std::to_string(N));
}

inline i64 cusp_width(i64 N, i64 gamma) {
  require_divisor(N, gamma);
  const i64 q = N / gamma;
  return q / gcd(q, gamma);
}

inline CuspDecomposition cusp_decompose(i64 N, i64 gamma) {
  const i64 ell = cusp_width(N, gamma);
  CuspDecomposition d;
  d.ell1 = part_supported_on(ell, gamma);
  d.ell2 = ell / d.ell1;
  d.N1 = (N / gamma) / d.ell2;
  d.A1 = part_supported_on(d.ell1 * gamma, d.N1);
  d.A2 = d.ell1 * gamma / d.A1;
  return d;
}

// delta is the least nonnegative inverse of alpha mod gamma; alpha = 0 gives S.
inline Matrix2 scaling_matrix(i64 alpha, i64 gamma) {
  if (gamma < 1) throw DomainError("NotCoprime", "scaling_matrix: gamma must be >= 1");
  if (gcd(alpha, gamma) != 1)
    throw DomainError("NotCoprime", "scaling_matrix: gcd(alpha, gamma) != 1");
  if (alpha == 0) return {0, -1, 1, 0};
  if (gamma == 1) return {alpha, alpha - 1, 1, 1};
  const i64 delta = mod_inverse(alpha, gamma);
  const i64 beta = (alpha * delta - 1) / gamma;
  return {alpha, beta, gamma, delta};
}

inline CuspData make_cusp(i64 N, i64 alpha, i64 gamma) {
  require_divisor(N, gamma);
  CuspData c;
  c.N = N;
  c.alpha = alpha;
  c.gamma = gamma;
  if (gamma == N) {
    // i-infinity representative; alpha is normalised to 1.
    c.alpha = 1;
    c.scaling = {1, 0, 0, 1};
    if (N > 1) c.scaling = {1, 0, N, 1};
  } else {
    c.scaling = scaling_matrix(alpha, gamma);
  }
  c.width = cusp_width(N, gamma);
  c.dec = cusp_decompose(N, gamma);
  return c;
}

inline CuspData cusp_infinity(i64 N) {
  CuspData c = make_cusp(N, 1, N);
  c.scaling = {1, 0, 0, 1};
  return c;
}

inline CuspData cusp_zero(i64 N) { return make_cusp(N, 0, 1); }

// "a/g", "inf" or "0".
inline CuspData parse_cusp(i64 N, std::string_view text) {
  if (text == "inf" || text == "i∞" || text == "oo") return cusp_infinity(N);
  if (text == "0") return cusp_zero(N);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    throw DomainError("InvalidCusp", "cusp must be 'a/g', 'inf' or '0'");
  i64 a = 0, g = 0;
  auto r1 = std::from_chars(text.data(), text.data() + slash, a);
  auto r2 = std::from_chars(text.data() + slash + 1, text.data() + text.size(), g);
  if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != text.data() + slash ||
      r2.ptr != text.data() + text.size())
    throw DomainError("InvalidCusp", "cannot parse cusp '" + std::string(text) + "'");
  if (g == N) return cusp_infinity(N);
  if (gcd(a, g) != 1) throw DomainError("InvalidCusp", "cusp numerator and denominator not coprime");
  return make_cusp(N, a, g);
}

// One representative alpha/gamma per cusp of Gamma0(N), grouped by gamma.
inline std::vector<CuspData> cusp_representatives(i64 N) {
  std::vector<CuspData> out;
  for (i64 g = 1; g <= N; ++g) {
    if (N % g != 0) continue;
    if (g == N) {
      out.push_back(cusp_infinity(N));
      continue;
    }
    if (g == 1) {
      out.push_back(cusp_zero(N));
      continue;
    }
    const i64 h = gcd(g, N / g);
    for (i64 t = 0; t < h; ++t) {
      if (gcd(t, h) != 1) continue;
      i64 a = t == 0 ? h : t;
      while (gcd(a, g) != 1) a += h;
      out.push_back(make_cusp(N, a, g));
    }
  }
  return out;
}

}  // namespace phmf
