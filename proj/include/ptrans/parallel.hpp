#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace ptrans {

// All reductions below use a fixed-shape pairwise tree over blocks of
// kSumBlock elements. The tree shape depends only on the element count,
// never on the thread count, so sums are bit-identical across runs and
// across --threads settings.
inline constexpr std::size_t kSumBlock = 4096;

void set_threads(int n);
int threads();

// Naive left-to-right accumulation, kept as the reference the deterministic
// tree is tested (and benchmarked) against.
double serial_sum(const double* x, std::size_t n);

namespace detail {

template <class F>
double pairwise(std::size_t lo, std::size_t n, F& f) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += f(lo + i);
    return s;
  }
  std::size_t h = n / 2;
  return pairwise(lo, h, f) + pairwise(lo + h, n - h, f);
}

}  // namespace detail

// Sum of f(0..n-1) over the fixed pairwise tree, parallel over blocks.
template <class F>
double det_sum_n(std::size_t n, F f) {
  if (n == 0) return 0.0;
  const std::size_t nb = (n + kSumBlock - 1) / kSumBlock;
  if (nb == 1) return detail::pairwise(0, n, f);
  std::vector<double> part(nb);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
    const std::size_t len = std::min(kSumBlock, n - lo);
    part[static_cast<std::size_t>(b)] = detail::pairwise(lo, len, f);
  }
  auto g = [&part](std::size_t i) { return part[i]; };
  return detail::pairwise(0, nb, g);
}

double det_sum(const double* x, std::size_t n);
double det_sum(const std::vector<double>& x);
double det_dot(const std::vector<double>& x, const std::vector<double>& y);

// Max of |x_i|; exact regardless of order, plain reduction.
double max_abs(const std::vector<double>& x);

template <class F>
void parallel_for(std::size_t n, F f) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    f(static_cast<std::size_t>(i));
}

}  // namespace ptrans
