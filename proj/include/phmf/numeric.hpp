#pragma once

// Compensated summation and fixed-order chunked reduction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <thread>
#include <vector>

namespace phmf {

// Neumaier's variant of Kahan summation, applied per component.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

class ComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void add(const ComplexSum& other) {
    re_.add(other.value().real());
    im_.add(other.value().imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  NeumaierSum re_, im_;
};

// Splits [begin, end) into fixed chunks, evaluates each independently and
// reduces in chunk order, so the result does not depend on the thread count.
template <class Acc, class ChunkFn, class Combine>
Acc chunked_reduce(long begin, long end, long chunk, int threads, ChunkFn fn, Combine combine) {
  if (end <= begin) return Acc{};
  chunk = std::max(1L, chunk);
  const long nchunks = (end - begin + chunk - 1) / chunk;
  std::vector<Acc> parts(static_cast<std::size_t>(nchunks));
  auto work = [&](long first, long stride) {
    for (long k = first; k < nchunks; k += stride) {
      const long lo = begin + k * chunk;
      parts[k] = fn(lo, std::min(end, lo + chunk));
    }
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(nchunks)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  Acc total{};
  for (auto& p : parts) combine(total, p);
  return total;
}

// Sum_{c > C} tau(c) c^{-3/2} <= 2 (log C + 2 + 2 gamma_E)/sqrt(C) + 2.5/C.
inline double divisor_tail_bound(double C) {
  constexpr double g = 0.57721566490153286;
  if (C < 1.0) C = 1.0;
  return 2.0 * (std::log(C) + 2.0 + 2.0 * g) / std::sqrt(C) + 2.5 / C;
}

}  // namespace phmf
