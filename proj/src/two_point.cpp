#include <cmath>
#include <stdexcept>

#include "ptrans/calculus.hpp"
#include "ptrans/solver.hpp"

namespace ptrans {
namespace {

// Metric density 1/sqrt(theta((1-b)/pi0, b/pi1) pi1) on the two-state
// lattice; integrable square-root-of-log singularities at b = 0 and b = 1.
// Takes b and 1-b separately so that neither is lost to rounding near its
// own singular end.
double speed_density(double bm, double bc, double pi0, double pi1) {
  const double th = log_mean(bc / pi0, bm / pi1);
  return 1.0 / std::sqrt(th * pi1);
}

}  // namespace

double two_point_oracle(double m, double beta0, double beta1) {
  if (!(m > 0.0)) throw std::domain_error("two_point_oracle: m must be > 0");
  if (!(beta0 >= 0.0 && beta0 <= 1.0 && beta1 >= 0.0 && beta1 <= 1.0))
    throw std::domain_error("two_point_oracle: masses must lie in [0, 1]");
  if (beta0 == beta1) return 0.0;
  const double a = std::min(beta0, beta1);
  const double b = std::max(beta0, beta1);
  const double pi0 = 1.0 / (1.0 + m);
  const double pi1 = m / (1.0 + m);
  const double half = 0.5 * (b - a);
  const double kH = 1.5707963267948966;  // pi/2

  // tanh-sinh node at u: beta is located by its distance to the nearer
  // interval endpoint, which keeps full relative accuracy where the
  // integrand blows up
  auto node = [&](double u) {
    const double w = kH * std::sinh(u);
    const double q = std::exp(-2.0 * std::fabs(w));
    if (q < 1e-290) return 0.0;
    const double dmin = (b - a) * q / (1.0 + q);
    double bm, bc;  // beta and 1 - beta
    if (w >= 0.0) {
      bm = b - dmin;
      bc = (1.0 - b) + dmin;
    } else {
      bm = a + dmin;
      bc = (1.0 - a) - dmin;
    }
    const double weight =
        half * kH * std::cosh(u) * 4.0 * q / ((1.0 + q) * (1.0 + q));
    return weight * speed_density(bm, bc, pi0, pi1);
  };

  auto node_sum = [&](double h, bool odd_only) {
    double acc = odd_only ? 0.0 : node(0.0);
    for (int side = 0; side < 2; ++side) {
      const double sgn = side == 0 ? 1.0 : -1.0;
      for (long j = 1;; j += odd_only ? 2 : 1) {
        const double u = sgn * h * static_cast<double>(j);
        const double term = node(u);
        acc += term;
        if (term == 0.0) break;
        if (std::fabs(u) > 1.5 && std::fabs(term) < 1e-18 * std::fabs(acc))
          break;
      }
    }
    return acc;
  };

  double h = 0.5;
  double integral = h * node_sum(h, false);
  for (int level = 0; level < 10; ++level) {
    h *= 0.5;
    const double refined = 0.5 * integral + h * node_sum(h, true);
    const double change = std::fabs(refined - integral);
    integral = refined;
    if (change <= 1e-14 * std::fabs(integral) && level >= 2) break;
  }
  return integral;
}

}  // namespace ptrans
