// L-functions of the Eisenstein limits: closed form against the Mellin route,
// and the functional equation pairing i-infinity with 0.

#include <cstdio>

#include "phmf/lfunction.hpp"

using namespace phmf;

int main() {
  const TruncationPolicy pol;
  for (i64 N : {2, 3}) {
    const auto ctx = make_level(N);
    for (const auto& cu : {cusp_infinity(N), cusp_zero(N)})
      for (cplx s : {cplx(3.0, 0.0), cplx(0.5, 2.0)}) {
        const auto c = L_closed(ctx, cu, s);
        const auto m = L_mellin_eisenstein(ctx, cu, s, default_t0(ctx), pol);
        std::printf("N=%lld %-3s s=%4.1f%+4.1fi  closed %+.12f%+.12fi  |mellin - closed| %.1e\n",
                    static_cast<long long>(N), cu.label().c_str(), s.real(), s.imag(), c.value.real(),
                    c.value.imag(), std::abs(m.value - c.value));
      }
    std::printf("  functional equation residual at s = 0.4+3i: %.1e\n",
                funceq_residual(ctx, {0.4, 3.0}, FuncEqKind::closed));
  }
  MellinSpec p;
  p.ctx = make_level(2);
  p.kind = TargetKind::point;
  p.z = {1.0 / 3, 4.0};
  p.s = 2.2;
  const auto v = L_mellin(p);
  std::printf("L_{2,z}(2.2) at z = 1/3 + 4i: %+.12f%+.12fi (err %.1e)\n", v.value.real(), v.value.imag(), v.err);
  std::printf("point functional equation residual: %.1e\n", funceq_residual(p.ctx, p.s, FuncEqKind::point, p.z));
}
