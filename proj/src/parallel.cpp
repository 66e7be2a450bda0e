#include "ptrans/parallel.hpp"

#include <omp.h>

#include <cmath>

namespace ptrans {

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int threads() { return omp_get_max_threads(); }

double serial_sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double det_sum(const double* x, std::size_t n) {
  return det_sum_n(n, [x](std::size_t i) { return x[i]; });
}

double det_sum(const std::vector<double>& x) {
  return det_sum(x.data(), x.size());
}

double det_dot(const std::vector<double>& x, const std::vector<double>& y) {
  const double* a = x.data();
  const double* b = y.data();
  return det_sum_n(x.size(), [a, b](std::size_t i) { return a[i] * b[i]; });
}

double max_abs(const std::vector<double>& x) {
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (long long i = 0; i < static_cast<long long>(x.size()); ++i)
    m = std::max(m, std::fabs(x[static_cast<std::size_t>(i)]));
  return m;
}

}  // namespace ptrans
