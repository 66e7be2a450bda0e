#include "ptrans/measure.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ptrans/parallel.hpp"

namespace ptrans {

double mass(const ConfigLattice& lat, const Density& mu) {
  const double* r = mu.rho.data();
  const double* p = lat.ref().pi.data();
  return det_sum_n(lat.states(), [r, p](std::size_t s) { return r[s] * p[s]; });
}

void normalize(const ConfigLattice& lat, Density& mu) {
  const double z = mass(lat, mu);
  if (!(z > 0.0)) throw std::domain_error("normalize: total mass must be > 0");
  for (double& v : mu.rho) v /= z;
}

bool is_probability(const ConfigLattice& lat, const Density& mu, double tol) {
  if (mu.rho.size() != lat.states()) return false;
  for (double v : mu.rho)
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
  return std::fabs(mass(lat, mu) - 1.0) <= tol;
}

Density poisson_density(const ConfigLattice& lat) {
  return Density{std::vector<double>(lat.states(), 1.0)};
}

Density dirac_density(const ConfigLattice& lat, const std::vector<int>& eta) {
  const std::size_t s = lat.encode(eta);
  Density mu{std::vector<double>(lat.states(), 0.0)};
  mu.rho[s] = 1.0 / lat.pi(s);
  return mu;
}

Density exp_perturbed_density(const ConfigLattice& lat, std::uint64_t seed,
                              double amp) {
  std::mt19937_64 eng(seed);
  Density mu{std::vector<double>(lat.states())};
  for (std::size_t s = 0; s < lat.states(); ++s) {
    // top 53 bits -> [0,1); fixed mapping, unlike std::uniform_real_distribution
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    mu.rho[s] = std::exp(amp * (2.0 * u - 1.0));
  }
  normalize(lat, mu);
  return mu;
}

std::vector<double> intensity_measure(const ConfigLattice& lat,
                                      const Density& mu) {
  const int d = lat.dim();
  std::vector<double> out(static_cast<std::size_t>(d));
  const double* r = mu.rho.data();
  const double* p = lat.ref().pi.data();
  for (int x = 0; x < d; ++x)
    out[static_cast<std::size_t>(x)] =
        det_sum_n(lat.states(), [&lat, r, p, x](std::size_t s) {
          return lat.occ(s, x) * r[s] * p[s];
        });
  return out;
}

FluxMeasure campbell_measure(const ConfigLattice& lat, const Density& mu) {
  FluxMeasure c{EdgeField(lat.slots(), 0.0)};
  const int d = lat.dim();
  for (int x = 0; x < d; ++x) {
    parallel_for(lat.states(), [&](std::size_t s) {
      if (!lat.open(s, x)) return;
      const std::size_t t = lat.up(s, x);
      c.atoms[lat.slot(x, s)] = (lat.occ(s, x) + 1) * mu.rho[t] * lat.pi(t);
    });
  }
  return c;
}

CampbellDensity campbell_density(const ConfigLattice& lat, const Density& mu) {
  const int d = lat.dim();
  CampbellDensity out;
  out.values.assign(lat.slots(), 0.0);
  out.defined.assign(static_cast<std::size_t>(d), false);
  const double* r = mu.rho.data();
  const double* p = lat.ref().pi.data();
  for (int x = 0; x < d; ++x) {
    const double z = det_sum_n(lat.states(), [&lat, r, p, x](std::size_t s) {
      return lat.open(s, x) ? r[lat.up(s, x)] * p[s] : 0.0;
    });
    if (!(z > 0.0)) continue;  // I_mu(x) = m_x z = 0: density undefined here
    out.defined[static_cast<std::size_t>(x)] = true;
    parallel_for(lat.states(), [&](std::size_t s) {
      if (lat.open(s, x)) out.values[lat.slot(x, s)] = r[lat.up(s, x)] / z;
    });
  }
  return out;
}

}  // namespace ptrans
