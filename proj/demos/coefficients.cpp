// Fourier coefficients of the Eisenstein limit H_{N,rho} by the three routes.

#include <cstdio>

#include "phmf/fourier.hpp"

using namespace phmf;

int main() {
  TruncationPolicy pol;
  pol.c_max = 20000;
  for (i64 N : {1, 2, 6}) {
    const auto ctx = make_level(N);
    std::vector<CuspData> cusps{cusp_infinity(N)};
    if (N > 1) cusps.push_back(cusp_zero(N));
    for (const auto& cu : cusps) {
      std::printf("N = %lld, cusp %s\n", static_cast<long long>(N), cu.label().c_str());
      std::printf("   n        series    (tail)      euler     closed\n");
      for (i64 n = 1; n <= 8; ++n) {
        const auto s = j_coeff(ctx, cu, n, JMethod::series, pol);
        std::printf("  %2lld  %12.6f  (%.1e)  %9g  %9g\n", static_cast<long long>(n), s.value.real(), s.err,
                    to_double(j_euler_exact(ctx, cu, n)), to_double(j_closed_exact(ctx, cu, n)));
      }
    }
  }
}
