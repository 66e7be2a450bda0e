#pragma once

#include <functional>
#include <string>

#include "ptrans/measure.hpp"

namespace ptrans {

// Time-discretized solution of the mass-balance equation on a staggered
// grid: densities live at the K+1 knots, fluxes on the K intervals. The
// discrete equation, per state eta and interval k, is
//   (rho_{k+1} - rho_k)(eta) pi(eta) = dt_k (sum_x V_k(eta - delta_x, x)
//                                            - sum_x V_k(eta, x)).
struct CEPath {
  std::vector<double> times;        // K+1, strictly increasing, times[0] = 0
  std::vector<Density> densities;   // K+1
  std::vector<FluxMeasure> fluxes;  // K, atoms in measure units
};

int intervals(const CEPath& path);
void validate_path(const ConfigLattice& lat, const CEPath& path);

// atoms -> w = atoms/(pi m) and back
FluxMeasure flux_from_w(const ConfigLattice& lat, const EdgeField& w);
EdgeField w_from_flux(const ConfigLattice& lat, const FluxMeasure& nu);

// div V(eta) = sum_x V(eta - delta_x, x) - sum_x V(eta, x); adjoint to the
// difference operator in the unweighted pairing: sum_eta G div V = sum_e DG V.
Observable flux_divergence(const ConfigLattice& lat, const FluxMeasure& nu);

// Max over states and intervals of the mass-balance violation.
double ce_residual(const ConfigLattice& lat, const CEPath& path);

// The dual semigroup flow from mu0 as a path: rho_k = P_{t_k} rho_0 and
// interval fluxes -D(P_t rho_0) pi m evaluated at interval midpoints, which
// solves the mass balance to second order in dt.
CEPath ou_path(const ConfigLattice& lat, const Density& mu0, double T, int K);

// (P_eps rho_k, e^{-eps} P_eps w_k): the semigroup image of a solution is a
// solution (up to the cap-boundary commutation defect, which the residual
// contract absorbs).
CEPath push_semigroup(const ConfigLattice& lat, const CEPath& path,
                      double eps);

// Run the path through the clock change lambda: [0, S] -> [0, T], given as a
// strictly increasing function with lambda(0) = 0 and lambda(S) = T, sampled
// on `knots` uniform intervals. Densities interpolate the input knots
// linearly; each new flux averages the input fluxes over the covered time
// span, which preserves the discrete mass balance exactly.
CEPath reparametrize(const ConfigLattice& lat, const CEPath& path,
                     const std::function<double(double)>& lambda, double S,
                     int knots);

// Join two paths with matching junction densities into one on [0, Ta + Tb].
CEPath concatenate(const ConfigLattice& lat, const CEPath& a, const CEPath& b);

// I_{rho_k}(x) - I_{rho_0}(x) against the cumulative per-site flux mass.
struct IntensityEvolutionReport {
  double worst_residual = 0.0;
  double bound = 0.0;  // K * ce_residual * max occupancy scale
  bool pass = false;
};

IntensityEvolutionReport intensity_evolution_check(const ConfigLattice& lat,
                                                   const CEPath& path);

// H(rho_K) - H(rho_0) against the discrete production integral
// sum_k dt_k sum_e D log(midpoint rho_k) V_k; first order in dt.
struct EntropyProductionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  bool skipped = false;
  std::string reason;
};

EntropyProductionReport entropy_production_check(const ConfigLattice& lat,
                                                 const CEPath& path);

// Per-interval metric speed bound: sqrt of the kinetic energy at the
// midpoint density.
std::vector<double> path_speed(const ConfigLattice& lat, const CEPath& path);

// Kinetic action sum_k dt_k L(midpoint_k, V_k), and its entropic relative
// with eps times the time-integrated Fisher information added.
double action(const ConfigLattice& lat, const CEPath& path);
double action_entropic(const ConfigLattice& lat, const CEPath& path,
                       double eps);

Density midpoint_density(const CEPath& path, int k);

}  // namespace ptrans
