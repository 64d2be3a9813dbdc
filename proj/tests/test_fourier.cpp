#include <gtest/gtest.h>

#include <numeric>

#include "phmf/fourier.hpp"

using namespace phmf;

namespace {

i64 brute_sigma(i64 n) {
  i64 s = 0;
  for (i64 d = 1; d <= n; ++d)
    if (n % d == 0) s += d;
  return s;
}

TruncationPolicy light_policy() {
  TruncationPolicy p;
  p.c_max = 2000;
  p.m_max = 60;
  p.n_max = 120;
  p.tol = 1e-13;
  return p;
}

// Ramanujan-expansion oracle. With c_c(n) = sum_{d | (c,n)} d mu(c/d) the series
// sum_{N | c} c_c(n)/c^2 collapses to sum_{d | n} mu(M)/(d M^2) prod_{p | M} p^2/(p^2-1),
// M = N/gcd(N, d); at the cusp 0 only c coprime to N occur.
Rational ramanujan_oracle(i64 N, bool at_inf, i64 n) {
  auto euler_part = [](i64 M) {
    Rational r(1);
    for (const auto& pp : factorize(M).factors) r *= Rational(pp.prime * pp.prime, pp.prime * pp.prime - 1);
    return r;
  };
  Rational acc(0);
  for (i64 d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    if (at_inf) {
      const i64 M = N / std::gcd(N, d);
      const i64 mu = mobius(M);
      if (mu != 0) acc += Rational(mu, d * M * M) * euler_part(M);
    } else if (std::gcd(d, N) == 1) {
      acc += Rational(1, d);
    }
  }
  if (!at_inf) acc *= euler_part(N) / N;
  return acc * 24 * n;
}

cplx moebius(i64 a, i64 b, i64 c, i64 d, cplx z) {
  return (static_cast<double>(a) * z + static_cast<double>(b)) / (static_cast<double>(c) * z + static_cast<double>(d));
}

}  // namespace

TEST(Fourier, LevelOneClosedFormIs24Sigma) {
  const auto ctx = make_level(1);
  const auto inf = cusp_infinity(1);
  for (i64 n = 1; n <= 50; ++n) {
    EXPECT_EQ(j_closed_exact(ctx, inf, n), Rational(24 * brute_sigma(n))) << n;
    EXPECT_EQ(j_euler_exact(ctx, inf, n), Rational(24 * brute_sigma(n))) << n;
  }
}

TEST(Fourier, SignedLevelTwoCoefficients) {
  const auto ctx = make_level(2);
  EXPECT_EQ(j_euler_exact(ctx, cusp_infinity(2), 1), Rational(-8));
  EXPECT_EQ(j_euler_exact(ctx, cusp_infinity(2), 2), Rational(8));
  EXPECT_EQ(j_closed_exact(ctx, cusp_infinity(2), 1), Rational(-8));
  EXPECT_EQ(j_closed_exact(ctx, cusp_infinity(2), 2), Rational(32));  // differs from the Euler route
}

// The Kloosterman series is the definition; the Euler route must reproduce it.
TEST(Fourier, SeriesMatchesEuler) {
  TruncationPolicy p;
  p.c_max = 20000;
  for (i64 N : {1, 2, 3, 4, 5, 6, 8, 12}) {
    const auto ctx = make_level(N);
    std::vector<CuspData> cs{cusp_infinity(N)};
    if (N > 1) cs.push_back(cusp_zero(N));
    for (const auto& cu : cs)
      for (i64 n = 1; n <= 8; ++n) {
        const auto se = j_coeff(ctx, cu, n, JMethod::series, p);
        const double e = to_double(j_euler_exact(ctx, cu, n));
        EXPECT_LE(std::abs(se.value.real() - e), se.err) << N << " " << cu.label() << " " << n;
      }
  }
}

TEST(Fourier, EulerMatchesRamanujanOracle) {
  for (i64 N : {1, 2, 3, 4, 5, 6, 8, 9, 12, 30}) {
    const auto ctx = make_level(N);
    for (i64 n = 1; n <= 60; ++n) {
      EXPECT_EQ(j_euler_exact(ctx, cusp_infinity(N), n), ramanujan_oracle(N, true, n)) << N << " " << n;
      if (N > 1) {
        EXPECT_EQ(j_euler_exact(ctx, cusp_zero(N), n), ramanujan_oracle(N, false, n)) << N << " " << n;
      }
    }
  }
}

TEST(Fourier, EulerCoefficientsAreMultiplicative) {
  for (i64 N : {2, 3, 4, 6, 12, 30}) {
    const auto ctx = make_level(N);
    for (const auto& cu : {cusp_infinity(N), cusp_zero(N)}) {
      const Rational j1 = j_euler_exact(ctx, cu, 1);
      for (i64 m = 1; m <= 12; ++m)
        for (i64 n = 1; n <= 12; ++n) {
          if (std::gcd(m, n) != 1) continue;
          EXPECT_EQ(j_euler_exact(ctx, cu, m * n) * j1, j_euler_exact(ctx, cu, m) * j_euler_exact(ctx, cu, n));
        }
      const auto all = dirichlet_coeffs_from_euler(ctx, cu, 30);
      ASSERT_EQ(all.size(), 30u);
      for (i64 n = 1; n <= 30; ++n) EXPECT_EQ(all[n - 1], j_euler_exact(ctx, cu, n));
    }
  }
}

TEST(Fourier, ClosedFormAgreesWhenCoprime) {
  for (i64 N : {2, 3, 4, 6, 10, 12}) {
    const auto ctx = make_level(N);
    for (const auto& cu : {cusp_infinity(N), cusp_zero(N)})
      for (i64 n = 1; n <= 40; ++n)
        if (std::gcd(n, N) == 1) {
          EXPECT_EQ(j_closed_exact(ctx, cu, n), j_euler_exact(ctx, cu, n)) << N << " " << n;
        }
  }
}

TEST(Fourier, RamanujanConstantTerm) {
  TruncationPolicy p;
  p.c_max = 200000;
  const auto a1 = a_rho(make_level(1), cusp_infinity(1), 1, 0, p);
  EXPECT_NEAR(a1.value.real(), 6.0 / (kPi * kPi), std::max(a1.err, 1e-12));
  EXPECT_LE(a1.err, 1e-3);
  // only even c contribute at level 2: -(1/4) sum_{k odd} mu(k)/k^2
  const auto a2 = a_rho(make_level(2), cusp_infinity(2), 1, 0, p);
  EXPECT_NEAR(a2.value.real(), -2.0 / (kPi * kPi), std::max(a2.err, 1e-12));
  EXPECT_THROW(a_rho(make_level(2), cusp_infinity(2), 0, 0, p), DomainError);
}

// H_1(it) = 3/(pi t) - 1 + 24 sum sigma(m) e^{-2 pi m t} and H_1(i/t) = -t^2 H_1(it).
TEST(Fourier, LevelOneEisensteinLimit) {
  const auto ctx = make_level(1);
  const auto inf = cusp_infinity(1);
  for (double t : {0.6, 1.0, 1.7, 4.0}) {
    double ref = 3.0 / (kPi * t) - 1.0;
    for (i64 m = 1; m <= 400; ++m) ref += 24.0 * brute_sigma(m) * std::exp(-kTwoPi * m * t);
    const auto h = eval_H_eisenstein(ctx, inf, t);
    EXPECT_NEAR(h.value.real(), ref, h.err + 1e-13) << t;
    const auto hi = eval_H_eisenstein(ctx, inf, 1.0 / t);
    EXPECT_NEAR(hi.value.real(), -t * t * h.value.real(), hi.err + t * t * h.err) << t;
  }
  EXPECT_NEAR(eval_H_eisenstein(ctx, inf, 10.0).value.real(), 3.0 / (10.0 * kPi) - 1.0, 1e-12);
  EXPECT_THROW(eval_H_eisenstein(ctx, inf, 0.0), DomainError);
}

TEST(Fourier, FrickeEisenstein) {
  for (i64 N : {2, 3, 5, 6}) {
    const auto ctx = make_level(N);
    const double Nd = static_cast<double>(N);
    for (double t : {0.5, 1.0, 2.0}) {
      const auto a = eval_H_eisenstein(ctx, cusp_zero(N), t);
      const auto b = eval_H_eisenstein(ctx, cusp_infinity(N), 1.0 / (Nd * t));
      EXPECT_LE(std::abs(a.value + b.value / (Nd * t * t)), a.err + b.err / (Nd * t * t)) << N << " " << t;
    }
  }
}

TEST(Fourier, PointExpansionIsInvariantInZ) {
  PointEvalRequest r;
  r.ctx = make_level(2);
  r.cusp = cusp_infinity(2);
  r.policy = light_policy();
  const cplx z{0.3, 1.2};
  r.tau = {0.1, 8.0};
  r.z = z;
  const auto a = eval_H_star(r);
  r.z = z + 1.0;
  const auto b = eval_H_star(r);
  r.z = moebius(1, 0, 2, 1, z);
  const auto c = eval_H_star(r);
  EXPECT_LE(std::abs(a.value - b.value), a.err + b.err + 1e-12);
  EXPECT_LE(std::abs(a.value - c.value), a.err + c.err + 1e-12);
  EXPECT_GT(std::abs(a.value), 1e-6);
}

TEST(Fourier, PointExpansionIsPeriodicInTau) {
  PointEvalRequest r;
  r.ctx = make_level(3);
  r.cusp = cusp_infinity(3);
  r.policy = light_policy();
  r.z = {0.2, 1.5};
  r.tau = {0.15, 2.0};
  const auto a = eval_H_star(r);
  r.tau += 1.0;
  const auto b = eval_H_star(r);
  EXPECT_LE(std::abs(a.value - b.value), a.err + b.err + 1e-12);
}

// H*_{N,-1/(Nz)}(tau) = N H*_{N,z}(N tau) compares the i-infinity and 0 expansions.
TEST(Fourier, PointFrickeRelation) {
  const i64 N = 11;
  const double Nd = static_cast<double>(N);
  const cplx z{0.1, 0.28};
  const cplx zp = -1.0 / (Nd * z);
  PointEvalRequest L;
  L.ctx = make_level(N);
  L.cusp = cusp_infinity(N);
  L.z = zp;
  L.tau = {0.17, 1.25 / zp.imag()};
  L.policy = light_policy();
  PointEvalRequest R = L;
  R.cusp = cusp_zero(N);
  R.z = z;
  R.tau = Nd * L.tau;
  const auto a = eval_H_star(L), b = eval_H_star(R);
  EXPECT_LE(std::abs(a.value - Nd * b.value), a.err + Nd * b.err);
}

TEST(Fourier, PointFrickeRelationFixesBesselSign) {
  const i64 N = 2;
  const cplx z{0.3, 1.1};
  const cplx zp = -1.0 / (2.0 * z);
  PointEvalRequest L;
  L.ctx = make_level(N);
  L.cusp = cusp_infinity(N);
  L.z = zp;
  L.tau = {0.17, 1.35 / zp.imag()};
  L.policy = light_policy();
  PointEvalRequest R = L;
  R.cusp = cusp_zero(N);
  R.z = z;
  R.tau = 2.0 * L.tau;
  const auto a = eval_H_star(L), b = eval_H_star(R);
  EXPECT_LE(std::abs(a.value - 2.0 * b.value), a.err + 2.0 * b.err);
  L.signs.i_inf = -1.0;
  const auto bad = eval_H_star(L);
  EXPECT_GT(std::abs(bad.value - 2.0 * b.value), 3.0 * (bad.err + 2.0 * b.err));
}

TEST(Fourier, RegionAndPoleGuards) {
  PointEvalRequest r;
  r.ctx = make_level(2);
  r.cusp = cusp_infinity(2);
  r.policy = light_policy();
  r.z = {0.2, 1.5};
  r.tau = {0.0, 1.4};
  EXPECT_THROW(eval_H_star(r), DomainError);
  r.tau = r.z + 3.0;
  try {
    eval_H_star(r);
    ADD_FAILURE();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.code, "RegionViolation");
  }
  r.relaxed = true;
  try {
    eval_H_star(r);
    ADD_FAILURE();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.code, "NearPole");
  }
}

TEST(Fourier, ImaginaryAxisGuard) {
  EXPECT_TRUE(imaginary_axis_guard(2, {0.0, 3.0}).hit);
  EXPECT_TRUE(imaginary_axis_guard(2, moebius(1, 0, 2, 1, {0.0, 3.0})).hit);
  EXPECT_TRUE(imaginary_axis_guard(3, cplx(5.0, 4.0)).hit);
  EXPECT_FALSE(imaginary_axis_guard(2, {1.0 / 3, 4.0}).hit);
  EXPECT_FALSE(imaginary_axis_guard(3, {0.25, 5.0}).hit);
}
