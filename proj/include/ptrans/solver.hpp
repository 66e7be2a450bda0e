#pragma once

#include <cstdint>
#include <string>

#include "ptrans/continuity.hpp"

namespace ptrans {

enum class InitMode { LINEAR, OU_BRIDGE };

struct SolverConfig {
  int K = 32;              // time intervals on [0, 1]
  int max_outer = 60;      // multiplier updates
  int max_inner = 20000;   // quasi-Newton steps per outer round
  double kkt_tol = 1e-8;
  double ce_tol = 1e-9;    // feasibility target, in density units
  // smoothing floor under the logarithmic mean: starts wide, tightens by
  // `decay` each outer round, never below `final`
  double theta_floor_init = 1e-6;
  double theta_floor_decay = 1e-2;
  double theta_floor_final = 1e-12;
  InitMode init = InitMode::LINEAR;
  std::uint64_t seed = 0;
  int memory = 25;  // quasi-Newton history
};

struct RefinementRow {
  int K = 0;
  double value = 0.0;
};

struct SolverReport {
  double objective = 0.0;           // value of the returned path
  double objective_smoothed = 0.0;  // same with the final floor in place
  double feasibility = 0.0;         // max mass-balance violation
  double stationarity = 0.0;        // projected-gradient norm at exit
  double kkt_residual = 0.0;        // stationarity + feasibility
  int outer_iterations = 0;
  long inner_iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;  // diagnostic only, never serialized
  // filled by refine(): value table over K with an empirical-order
  // extrapolation and its error bar
  std::vector<RefinementRow> refinement;
  double order = 0.0;
  double extrapolated = 0.0;
  double error_estimate = 0.0;
  bool monotone = true;
};

struct SolveResult {
  double value = 0.0;  // squared distance, or the entropic cost
  CEPath path;
  SolverReport report;
};

// Minimize the discretized kinetic action over mass-balance paths from mu0
// to mu1 on [0, 1]: variables are the interior knot densities (kept >= 0 by
// projection) and the interval velocities; constraints are eliminated by an
// augmented Lagrangian with limited-memory quasi-Newton inner solves. The
// returned value is the action of the returned path, so it is an upper
// bound for the discrete optimum up to the reported KKT residual.
SolveResult solve_distance(const ConfigLattice& lat, const Density& mu0,
                           const Density& mu1, const SolverConfig& cfg);

// Same with eps times the time-integrated Fisher information added.
SolveResult solve_entropic(const ConfigLattice& lat, const Density& mu0,
                           const Density& mu1, double eps,
                           const SolverConfig& cfg);

// Value table over an increasing ladder of K, with the empirical
// convergence order and a Richardson extrapolate when the table is
// monotone.
SolverReport refine(const ConfigLattice& lat, const Density& mu0,
                    const Density& mu1, const std::vector<int>& ladder,
                    const SolverConfig& cfg);

// Least-squares projection of a flux onto gradient fields q . D(phi) with
// weight q = rho_hat pi m, by a conjugate-gradient solve of the weighted
// graph Laplacian. Keeps the divergence (hence mass balance) exactly and
// never increases the kinetic action. `singular` reports a rank-deficient
// system (zero-weight regions); the returned flux is then the least-squares
// representative.
struct ProjectionResult {
  FluxMeasure flux;
  Observable potential;
  bool singular = false;
};

ProjectionResult project_gradient(const ConfigLattice& lat, const Density& mid,
                                  const FluxMeasure& nu);

struct GeodesicResult {
  CEPath path;
  SolverReport report;
  bool projection_singular = false;
};

// solve_distance followed by the per-interval gauge projection above.
GeodesicResult geodesic(const ConfigLattice& lat, const Density& mu0,
                        const Density& mu1, const SolverConfig& cfg);

// Exact squared-distance oracle for the single-site, cap-1 lattice with
// intensity m, between the measures with mass beta0 and beta1 on the
// occupied state:
//   W = | int_{beta0}^{beta1} dbeta / sqrt(theta((1-beta)/pi0, beta/pi1)
//                                          pi0 m) |,
// evaluated by double-exponential quadrature (the integrand has endpoint
// singularities when a beta endpoint sits at 0 or 1). Returns W, not W^2.
double two_point_oracle(double m, double beta0, double beta1);

}  // namespace ptrans
