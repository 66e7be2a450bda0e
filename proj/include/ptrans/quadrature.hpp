#pragma once

#include <cstddef>
#include <functional>

namespace ptrans {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |last level - previous level|
  int levels = 0;
  std::size_t evals = 0;
  bool converged = false;
};

// Tanh-sinh (double-exponential) quadrature of f over (a, b). The integrand
// receives its position as distances to the two endpoints, f(da, db) with
// x = a + da = b - db; the distances stay accurate near the endpoints where
// a + da would round, which is what makes integrable endpoint singularities
// (log or inverse square root) converge at full precision.
QuadratureResult tanh_sinh(const std::function<double(double, double)>& f,
                           double a, double b, double target_rel = 1e-13,
                           int max_level = 12);

// Composite Simpson rule with n (even) intervals, plain f(x).
double simpson(const std::function<double(double)>& f, double a, double b,
               int n);

}  // namespace ptrans
