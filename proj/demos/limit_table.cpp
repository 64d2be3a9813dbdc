// Corrected L_{N,x+iy}(s) approaching L_{N,inf}(s) (and the Fricke side
// approaching L_{N,0}(s)) as y grows.

#include <cstdio>

#include "phmf/lfunction.hpp"

using namespace phmf;

int main() {
  const auto ctx = make_level(2);
  const double x = 1.0 / 3;
  const cplx s = 3.0;
  for (auto v : {LimitVariant::point, LimitVariant::fricke}) {
    std::printf("%s variant, N = 2, x = 1/3, s = 3\n", v == LimitVariant::point ? "point" : "Fricke");
    for (const auto& r : limit_table(ctx, x, s, {3, 4, 6, 8, 12}, v))
      std::printf("  y = %4.1f  corrected %+.12f%+.12fi  error %.2e\n", r.y, r.corrected.real(), r.corrected.imag(),
                  r.error);
  }
}
