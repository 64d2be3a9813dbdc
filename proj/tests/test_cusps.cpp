#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "phmf/cusps.hpp"

using namespace phmf;

namespace {

Matrix2 mul(const Matrix2& a, const Matrix2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

Matrix2 inv(const Matrix2& a) { return {a[3], -a[1], -a[2], a[0]}; }

// Smallest h > 0 with sigma T^h sigma^{-1} in Gamma0(N).
i64 brute_width(const CuspData& c) {
  for (i64 h = 1;; ++h) {
    const Matrix2 g = mul(mul(c.scaling, Matrix2{1, h, 0, 1}), inv(c.scaling));
    if (g[2] % c.N == 0) return h;
  }
}

// gamma = (A B; C D) in Gamma0(N) with gamma(a1/c1) = a2/c2: the bottom row gives
// C a1 + D c1 = +-c2 and (A, B) then follow from Cramer's rule. i-infinity is 1/N.
bool brute_equivalent(i64 N, i64 a1, i64 c1, i64 a2, i64 c2) {
  for (i64 k = -10; k <= 10; ++k)
    for (i64 D = -300; D <= 300; ++D) {
      const i64 C = N * k;
      if (std::gcd(C, D) != 1) continue;
      for (i64 sg : {1, -1}) {
        const i64 den = C * a1 + D * c1;
        if (den != sg * c2) continue;
        if ((c1 + C * sg * a2) % den == 0 && (D * sg * a2 - a1) % den == 0) return true;
      }
    }
  return false;
}

std::pair<i64, i64> fraction(const CuspData& c) {
  return c.is_infinity() ? std::pair<i64, i64>{1, c.N} : std::pair<i64, i64>{c.alpha, c.gamma};
}

}  // namespace

TEST(Cusps, WidthMatchesStabilizer) {
  for (i64 N = 1; N <= 36; ++N)
    for (const auto& c : cusp_representatives(N)) EXPECT_EQ(c.width, brute_width(c)) << N << " " << c.label();
}

TEST(Cusps, ScalingMatrixSendsInfinityToCusp) {
  for (i64 N : {4, 6, 9, 12, 18, 30})
    for (const auto& c : cusp_representatives(N)) {
      EXPECT_EQ(det(c.scaling), 1);
      if (c.is_infinity()) continue;
      EXPECT_EQ(c.scaling[0] * c.gamma, c.scaling[2] * c.alpha) << c.label();
    }
}

TEST(Cusps, RepresentativeCountAndInequivalence) {
  for (i64 N = 1; N <= 30; ++N) {
    i64 expected = 0;
    for (i64 d = 1; d <= N; ++d)
      if (N % d == 0) expected += euler_phi(std::gcd(d, N / d));
    const auto reps = cusp_representatives(N);
    EXPECT_EQ(static_cast<i64>(reps.size()), expected) << N;
  }
  for (i64 N : {8, 9, 12}) {
    const auto reps = cusp_representatives(N);
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = i + 1; j < reps.size(); ++j) {
        const auto [a1, c1] = fraction(reps[i]);
        const auto [a2, c2] = fraction(reps[j]);
        EXPECT_FALSE(brute_equivalent(N, a1, c1, a2, c2)) << reps[i].label() << " ~ " << reps[j].label();
      }
  }
  EXPECT_TRUE(brute_equivalent(12, 1, 4, 5, 4));
  EXPECT_TRUE(brute_equivalent(12, 1, 12, 1, 24));
}

TEST(Cusps, DecompositionIdentities) {
  for (i64 N = 1; N <= 60; ++N)
    for (const auto& c : cusp_representatives(N)) {
      const auto& d = c.dec;
      EXPECT_EQ(d.ell1 * d.ell2, c.width);
      EXPECT_EQ(d.N1 * d.ell2, N / c.gamma);
      EXPECT_EQ(d.A1 * d.A2, d.ell1 * c.gamma);
    }
}

TEST(Cusps, ParseAndLabel) {
  EXPECT_TRUE(parse_cusp(6, "inf").is_infinity());
  EXPECT_EQ(parse_cusp(6, "0").label(), "0");
  EXPECT_EQ(parse_cusp(12, "1/4").label(), "1/4");
  EXPECT_EQ(parse_cusp(12, "1/12").label(), "inf");
  EXPECT_THROW(parse_cusp(12, "1/5"), DomainError);
  EXPECT_THROW(parse_cusp(12, "2/4"), DomainError);
  EXPECT_THROW(parse_cusp(12, "x"), DomainError);
  EXPECT_THROW(parse_cusp(12, "1/4junk"), DomainError);
}
