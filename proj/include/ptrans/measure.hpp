#pragma once

#include <cstdint>
#include <vector>

#include "ptrans/lattice.hpp"

namespace ptrans {

// Function of the configuration, one value per state.
using Observable = std::vector<double>;

// Function of (configuration, site), one value per slot; identically zero
// on closed slots (eta_x = cap_x).
using EdgeField = std::vector<double>;

// Measure on (configuration, site) pairs given by its atoms per slot. The
// density w relative to pi (x) m is atoms(x, eta) / (pi(eta) m_x).
struct FluxMeasure {
  EdgeField atoms;
};

// Probability density rho relative to pi; the measure is mu = rho pi.
struct Density {
  std::vector<double> rho;
};

double mass(const ConfigLattice& lat, const Density& mu);
void normalize(const ConfigLattice& lat, Density& mu);
bool is_probability(const ConfigLattice& lat, const Density& mu,
                    double tol = 1e-12);

Density poisson_density(const ConfigLattice& lat);
Density dirac_density(const ConfigLattice& lat, const std::vector<int>& eta);

// rho proportional to exp(g) with g_eta i.i.d. uniform on [-amp, amp] from a
// seeded mt19937_64; strictly positive, reproducible across platforms.
Density exp_perturbed_density(const ConfigLattice& lat, std::uint64_t seed,
                              double amp);

// I_mu(x) = sum_eta eta_x rho(eta) pi(eta), the expected occupancy per site.
std::vector<double> intensity_measure(const ConfigLattice& lat,
                                      const Density& mu);

// Reduced Campbell measure: atom at slot (x, eta) equals
// (eta_x + 1) rho(eta + delta_x) pi(eta + delta_x).
FluxMeasure campbell_measure(const ConfigLattice& lat, const Density& mu);

// Density of the Campbell measure relative to pi (x) I_mu: value at slot
// (x, eta) is rho(eta + delta_x) / Z_x with Z_x = sum_gamma
// rho(gamma + delta_x) pi(gamma). Undefined (and flagged) at sites with
// I_mu(x) = 0.
struct CampbellDensity {
  EdgeField values;
  std::vector<bool> defined;  // per site
};

CampbellDensity campbell_density(const ConfigLattice& lat, const Density& mu);

}  // namespace ptrans
