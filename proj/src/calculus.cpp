#include "ptrans/calculus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ptrans/parallel.hpp"

namespace ptrans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// phi(x) = (x - 1)/log x on (0, 1]; series around 1 avoids the 0/0
// cancellation. Coefficients are the Taylor expansion of phi(1 + u).
double phi(double x) {
  const double u = x - 1.0;
  if (std::fabs(u) < 1e-4)
    return 1.0 + u * (0.5 + u * (-1.0 / 12 + u * (1.0 / 24 + u * (-19.0 / 720))));
  return u / std::log(x);
}

// phi'(x), same switch point.
double dphi(double x) {
  const double u = x - 1.0;
  if (std::fabs(u) < 1e-4)
    return 0.5 + u * (-1.0 / 6 + u * (1.0 / 8 + u * (-19.0 / 180)));
  const double lg = std::log(x);
  return (lg - u / x) / (lg * lg);
}

}  // namespace

double log_mean(double s, double t) {
  if (s < 0.0 || t < 0.0) throw std::domain_error("log_mean: negative input");
  if (s == 0.0 || t == 0.0) return 0.0;
  // evaluate as larger * phi(smaller/larger) so the ratio stays in (0, 1]
  return s <= t ? t * phi(s / t) : s * phi(t / s);
}

void log_mean_partials(double s, double t, double& ds, double& dt) {
  if (!(s > 0.0) || !(t > 0.0))
    throw std::domain_error("log_mean_partials: inputs must be positive");
  if (s <= t) {
    const double r = s / t;
    ds = dphi(r);
    dt = phi(r) - r * dphi(r);
  } else {
    const double r = t / s;
    dt = dphi(r);
    ds = phi(r) - r * dphi(r);
  }
}

EdgeField difference(const ConfigLattice& lat, const Observable& f) {
  EdgeField out(lat.slots(), 0.0);
  for (int x = 0; x < lat.dim(); ++x) {
    parallel_for(lat.states(), [&](std::size_t s) {
      if (lat.open(s, x)) out[lat.slot(x, s)] = f[lat.up(s, x)] - f[s];
    });
  }
  return out;
}

Observable skorokhod_div(const ConfigLattice& lat, const EdgeField& u) {
  Observable out(lat.states(), 0.0);
  parallel_for(lat.states(), [&](std::size_t s) {
    double v = 0.0;
    for (int x = 0; x < lat.dim(); ++x) {
      const int n = lat.occ(s, x);
      if (n > 0) v += n * u[lat.slot(x, lat.down(s, x))];
      if (n < lat.cap(x)) v -= lat.m(x) * u[lat.slot(x, s)];
    }
    out[s] = v;
  });
  return out;
}

Observable generator_apply(const ConfigLattice& lat, const Observable& f) {
  Observable out(lat.states(), 0.0);
  parallel_for(lat.states(), [&](std::size_t s) {
    double v = 0.0;
    for (int x = 0; x < lat.dim(); ++x) {
      const int n = lat.occ(s, x);
      if (n < lat.cap(x)) v += lat.m(x) * (f[lat.up(s, x)] - f[s]);
      if (n > 0) v += n * (f[lat.down(s, x)] - f[s]);
    }
    out[s] = v;
  });
  return out;
}

double entropy(const ConfigLattice& lat, const Density& mu) {
  const double* r = mu.rho.data();
  const double* p = lat.ref().pi.data();
  return det_sum_n(lat.states(), [r, p](std::size_t s) {
    const double v = r[s];
    return v > 0.0 ? v * std::log(v) * p[s] : 0.0;
  });
}

double fisher_information(const ConfigLattice& lat, const Density& mu) {
  const double* r = mu.rho.data();
  EdgeField term(lat.slots(), 0.0);
  bool infinite = false;
  for (int x = 0; x < lat.dim(); ++x) {
    parallel_for(lat.states(), [&](std::size_t s) {
      if (!lat.open(s, x)) return;
      const double a = r[s];
      const double b = r[lat.up(s, x)];
      if (a == b) return;  // covers a = b = 0
      if (a <= 0.0 || b <= 0.0) {
        infinite = true;
        return;
      }
      term[lat.slot(x, s)] = (b - a) * (std::log(b) - std::log(a)) * lat.pim(x, s);
    });
  }
  if (infinite) return kInf;
  return det_sum(term);
}

double fisher_information_guarded(const ConfigLattice& lat, const Density& mu,
                                  double floor) {
  const double* r = mu.rho.data();
  EdgeField term(lat.slots(), 0.0);
  for (int x = 0; x < lat.dim(); ++x) {
    parallel_for(lat.states(), [&](std::size_t s) {
      if (!lat.open(s, x)) return;
      const double a = r[s];
      const double b = r[lat.up(s, x)];
      if (a < floor || b < floor || a == b) return;
      term[lat.slot(x, s)] = (b - a) * (std::log(b) - std::log(a)) * lat.pim(x, s);
    });
  }
  return det_sum(term);
}

EdgeField rho_hat(const ConfigLattice& lat, const Density& mu) {
  EdgeField out(lat.slots(), 0.0);
  for (int x = 0; x < lat.dim(); ++x) {
    parallel_for(lat.states(), [&](std::size_t s) {
      if (lat.open(s, x))
        out[lat.slot(x, s)] = log_mean(mu.rho[s], mu.rho[lat.up(s, x)]);
    });
  }
  return out;
}

double lagrangian(const ConfigLattice& lat, const Density& mu,
                  const FluxMeasure& nu) {
  const EdgeField hat = rho_hat(lat, mu);
  EdgeField term(lat.slots(), 0.0);
  bool infinite = false;
  for (int x = 0; x < lat.dim(); ++x) {
    parallel_for(lat.states(), [&](std::size_t s) {
      if (!lat.open(s, x)) return;
      const std::size_t e = lat.slot(x, s);
      const double a = nu.atoms[e];
      if (a == 0.0) return;
      const double denom = hat[e] * lat.pim(x, s);
      if (denom <= 0.0) {
        infinite = true;
        return;
      }
      term[e] = a * a / denom;
    });
  }
  if (infinite) return kInf;
  return det_sum(term);
}

FluxMassBoundReport flux_mass_bound_check(const ConfigLattice& lat,
                                          const Density& mu,
                                          const FluxMeasure& nu) {
  FluxMassBoundReport rep;
  const double lag = lagrangian(lat, mu, nu);
  rep.lagrangian_finite = std::isfinite(lag);
  const std::vector<double> intens = intensity_measure(lat, mu);
  const int d = lat.dim();
  rep.lhs.resize(static_cast<std::size_t>(d));
  rep.rhs.resize(static_cast<std::size_t>(d));
  rep.worst_slack = kInf;
  for (int x = 0; x < d; ++x) {
    const double* a = nu.atoms.data() + lat.slot(x, 0);
    rep.lhs[static_cast<std::size_t>(x)] =
        det_sum_n(lat.states(), [a](std::size_t s) { return std::fabs(a[s]); });
    rep.rhs[static_cast<std::size_t>(x)] = std::sqrt(
        0.5 * (lat.m(x) + intens[static_cast<std::size_t>(x)]) * lag);
    rep.worst_slack = std::min(
        rep.worst_slack, rep.rhs[static_cast<std::size_t>(x)] -
                             rep.lhs[static_cast<std::size_t>(x)]);
  }
  rep.pass = rep.worst_slack >= -1e-12;
  return rep;
}

double integral_pi(const ConfigLattice& lat, const Observable& f) {
  const double* p = lat.ref().pi.data();
  const double* v = f.data();
  return det_sum_n(lat.states(), [v, p](std::size_t s) { return v[s] * p[s]; });
}

double inner_pi(const ConfigLattice& lat, const Observable& f,
                const Observable& g) {
  const double* p = lat.ref().pi.data();
  const double* a = f.data();
  const double* b = g.data();
  return det_sum_n(lat.states(),
                   [a, b, p](std::size_t s) { return a[s] * b[s] * p[s]; });
}

double inner_pim(const ConfigLattice& lat, const EdgeField& u,
                 const EdgeField& v) {
  EdgeField term(lat.slots(), 0.0);
  for (int x = 0; x < lat.dim(); ++x) {
    parallel_for(lat.states(), [&](std::size_t s) {
      if (lat.open(s, x)) {
        const std::size_t e = lat.slot(x, s);
        term[e] = u[e] * v[e] * lat.pim(x, s);
      }
    });
  }
  return det_sum(term);
}

}  // namespace ptrans
