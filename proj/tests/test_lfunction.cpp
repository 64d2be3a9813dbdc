#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phmf/lfunction.hpp"

using namespace phmf;

namespace {

i64 brute_sigma(i64 n) {
  i64 s = 0;
  for (i64 d = 1; d <= n; ++d)
    if (n % d == 0) s += d;
  return s;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// int_T^inf t^{s-1} (w/(1-w) - w'/(1-w')) dt with w = e(it - z), w' = e(it - zbar)
cplx i4_quadrature(cplx s, cplx z, double T) {
  const double x = z.real(), y = z.imag();
  auto g = [&](double t) {
    const cplx I{0.0, 1.0};
    const cplx w = std::exp(kTwoPi * I * (cplx(0.0, t) - z));
    const cplx wb = std::exp(kTwoPi * I * (cplx(0.0, t) - std::conj(z)));
    return std::exp((s - 1.0) * std::log(t)) * (w / (1.0 - w) - wb / (1.0 - wb));
  };
  auto integrate = [&](double a, double b) {
    auto re = [&](double t) { return g(t).real(); };
    auto im = [&](double t) { return g(t).imag(); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    return cplx(GK::integrate(re, a, b, 25, 1e-14), GK::integrate(im, a, b, 25, 1e-14));
  };
  (void)x;
  const double top = std::max(T, y) + 40.0;
  if (T >= y) return integrate(T, top);
  return integrate(T, y) + integrate(y, top);
}

TruncationPolicy policy() { return TruncationPolicy{}; }

}  // namespace

TEST(LFunction, LevelOneClosedFormMatchesDirichletSeries) {
  const auto ctx = make_level(1);
  for (cplx s : {cplx(3.0, 0.0), cplx(4.5, 1.0)}) {
    cplx sum = 0.0;
    for (i64 n = 20000; n >= 1; --n) sum += 24.0 * brute_sigma(n) * std::exp(-s * std::log(static_cast<double>(n)));
    const cplx ref = cgamma(s) * std::exp(-s * std::log(kTwoPi)) * sum;
    const double tail = std::abs(cgamma(s) * std::exp(-s * std::log(kTwoPi))) * 24.0 * 2.0 *
                        std::pow(20000.0, 2.0 - s.real()) * (1.0 + std::log(20000.0)) / (s.real() - 2.0);
    EXPECT_LE(std::abs(L_closed(ctx, cusp_infinity(1), s).value - ref), tail) << s;
  }
}

TEST(LFunction, DirichletCheckWithinTail) {
  for (i64 N : {2, 3, 4, 6}) {
    const auto ctx = make_level(N);
    for (const auto& cu : {cusp_infinity(N), cusp_zero(N)}) {
      const auto d = dirichlet_check(ctx, cu, {3.2, 1.0}, 5000);
      EXPECT_LE(d.diff, d.tail) << N << " " << cu.label();
    }
  }
  EXPECT_THROW(dirichlet_check(make_level(2), cusp_infinity(2), 2.0, 10), DomainError);
}

TEST(LFunction, EulerProductOfLocalFactors) {
  for (i64 N : {1, 2, 6, 12}) {
    const auto ctx = make_level(N);
    std::vector<CuspData> cs{cusp_infinity(N)};
    if (N > 1) cs.push_back(cusp_zero(N));
    for (const auto& cu : cs)
      for (cplx s : {cplx(5.0, 0.0), cplx(6.0, 2.0)}) {
        cplx prod = 1.0;
        for (i64 p = 2; p < 3000; ++p)
          if (is_prime(p)) prod *= local_factor(ctx, cu, p, s);
        const cplx L = 24.0 * std::exp(-s * std::log(kTwoPi)) * cgamma(s) * prod;
        const cplx ref = L_closed(ctx, cu, s).value;
        EXPECT_LE(std::abs(L - ref) / std::abs(ref), 1e-8) << N << " " << cu.label() << " " << s;
      }
  }
}

TEST(LFunction, PolesAndRemovableSingularities) {
  const auto ctx = make_level(2);
  const auto inf = cusp_infinity(2), zero = cusp_zero(2);
  for (cplx p : {cplx(1.0, 0.0), cplx(0.0, 0.0)}) {
    try {
      L_closed(ctx, inf, p);
      ADD_FAILURE();
    } catch (const DomainError& e) {
      EXPECT_EQ(e.code, "PoleOfL");
    }
  }
  EXPECT_THROW(L_closed(ctx, zero, 2.0), DomainError);
  const double h = 1e-2;
  const cplx mid = 0.5 * (L_closed(ctx, inf, 2.0 + h).value + L_closed(ctx, inf, 2.0 - h).value);
  const cplx at2 = L_closed(ctx, inf, 2.0).value;
  EXPECT_TRUE(std::isfinite(at2.real()));
  EXPECT_LE(std::abs(at2 - mid), 1e-3 * std::abs(mid));
  EXPECT_LE(std::abs(L_closed(ctx, inf, 2.0 + 5e-4).value - at2), 1e-2 * std::abs(at2));
  EXPECT_THROW(L_closed(make_level(1), cusp_infinity(1), 2.0), DomainError);
}

TEST(LFunction, ClosedFunctionalEquation) {
  for (i64 N : {1, 2, 3, 4, 6, 12})
    for (cplx s : {cplx(0.3, 0.2), cplx(1.7, -3.0), cplx(0.6, 7.5), cplx(2.5, 1.0), cplx(-1.5, 0.5)})
      EXPECT_LE(funceq_residual(make_level(N), s, FuncEqKind::closed), 1e-10) << N << " " << s;
}

TEST(LFunction, MellinMatchesClosed) {
  const auto pol = policy();
  for (i64 N : {1, 2, 3, 4}) {
    const auto ctx = make_level(N);
    std::vector<CuspData> cs{cusp_infinity(N)};
    if (N > 1) cs.push_back(cusp_zero(N));
    for (const auto& cu : cs)
      for (cplx s : {cplx(3.0, 0.0), cplx(2.5, 1.5), cplx(0.5, 2.0), cplx(-0.7, 0.3)}) {
        const auto m = L_mellin_eisenstein(ctx, cu, s, default_t0(ctx), pol);
        const auto m2 = L_mellin_eisenstein(ctx, cu, s, 1.3, pol);
        const cplx c = L_closed(ctx, cu, s).value;
        EXPECT_LE(std::abs(m.value - c), 1e-8) << N << " " << cu.label() << " " << s;
        EXPECT_LE(std::abs(m.value - m2.value), 1e-8);
      }
  }
  EXPECT_LE(funceq_residual(make_level(3), {0.4, 1.0}, FuncEqKind::mellin, {}, pol), 1e-8);
}

TEST(LFunction, I4AgainstQuadrature) {
  const auto pol = policy();
  const cplx z{1.0 / 3, 4.0};
  for (cplx s : {cplx(2.2, 0.0), cplx(1.6, 0.4), cplx(3.0, 0.0), cplx(-1.0, 0.0), cplx(0.5, -2.0), cplx(5e-4, 0.0)})
    for (double T : {0.7, 1.4, 5.0}) {
      const cplx v = mellin_i4(s, z, T, pol).total();
      const cplx q = i4_quadrature(s, z, T);
      EXPECT_LE(std::abs(v - q), 1e-9 * std::max(1.0, std::abs(q))) << s << " T=" << T;
    }
  const cplx z2{0.21, 6.5};
  const cplx v = mellin_i4({2.7, 1.0}, z2, 0.9, pol).total();
  EXPECT_LE(std::abs(v - i4_quadrature({2.7, 1.0}, z2, 0.9)), 1e-9 * std::abs(v));
}

TEST(LFunction, PointTargetIsIndependentOfCut) {
  MellinSpec p;
  p.ctx = make_level(2);
  p.kind = TargetKind::point;
  p.z = {1.0 / 3, 4.0};
  p.s = 2.2;
  p.t0 = 0.7;
  const auto a = L_mellin(p);
  p.t0 = 1.4;
  const auto b = L_mellin(p);
  EXPECT_LE(std::abs(a.value - b.value), 1e-7);
  EXPECT_LE(a.err, 1e-6);
}

// Evaluating the two sides with different cuts keeps the identity from being
// an algebraic consequence of the shared assembly.
TEST(LFunction, PointFunctionalEquationWithIndependentCuts) {
  struct Case {
    i64 N;
    cplx z, s;
  };
  for (const auto& c : {Case{2, {1.0 / 3, 4.0}, {2.2, 0.0}}, Case{3, {0.25, 5.0}, {1.6, 0.4}}}) {
    const double N = static_cast<double>(c.N);
    MellinSpec p;
    p.ctx = make_level(c.N);
    p.kind = TargetKind::point;
    p.z = c.z;
    p.s = c.s;
    p.t0 = 0.8;
    MellinSpec q = p;
    q.kind = TargetKind::fricke_point;
    q.s = 2.0 - c.s;
    q.t0 = 1.3 / std::sqrt(N);
    const cplx lhs = std::exp(c.s / 2.0 * std::log(N)) * L_mellin(p).value;
    const cplx rhs = std::exp((2.0 - c.s) / 2.0 * std::log(N)) * L_mellin(q).value;
    EXPECT_LE(std::abs(lhs + rhs), 1e-5) << c.N;
    EXPECT_GT(std::abs(lhs), 1e-3);
  }
}

TEST(LFunction, PointTargetPreconditions) {
  MellinSpec p;
  p.ctx = make_level(2);
  p.kind = TargetKind::point;
  p.s = 2.2;
  p.z = {0.3, 1.5};
  try {
    L_mellin(p);
    ADD_FAILURE();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.code, "Precondition");
  }
  p.z = {0.0, 3.0};
  try {
    L_mellin(p);
    ADD_FAILURE();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.code, "TooCloseToSingularity");
  }
  p.z = {1.0 / 3, 4.0};
  p.s = 1.0;
  EXPECT_THROW(L_mellin(p), DomainError);
}

TEST(LFunction, LimitTableConverges) {
  const auto ctx = make_level(2);
  const auto rows = limit_table(ctx, 1.0 / 3, 3.0, {4, 6, 8});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LT(rows[k].error, rows[k - 1].error);
  EXPECT_LT(rows.back().error, 1e-2);
  const auto fr = limit_table(ctx, 1.0 / 3, 3.0, {4, 6, 8}, LimitVariant::fricke);
  for (std::size_t k = 1; k < fr.size(); ++k) EXPECT_LT(fr[k].error, fr[k - 1].error);
  EXPECT_LT(fr.back().error, 1e-2);
  // error scales like y^{-2} for the Fricke variant
  EXPECT_NEAR(fr[0].error / fr[2].error, 4.0, 0.5);
  EXPECT_THROW(limit_table(ctx, 1.0, 3.0, {4}), DomainError);
}

TEST(LFunction, LimitCorrectionTerms) {
  const auto lc = limit_correction(3.0, 1.0 / 3, 5.0);
  EXPECT_EQ(lc.terms.size(), 3u);
  EXPECT_NEAR(lc.leading.real(), 125.0 / 3.0, 1e-12);
  // j = 1 through the logarithm: Li_1(w) = -log(1 - w)
  const cplx e1 = std::polar(1.0, kTwoPi / 3.0);
  const cplx expect1 = 25.0 / kTwoPi * (-std::log(1.0 - std::conj(e1)) + std::log(1.0 - e1));
  EXPECT_LE(std::abs(lc.terms[0] - expect1), 1e-12);
}
