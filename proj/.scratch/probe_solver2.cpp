#include <cmath>
#include <cstdio>

#include "ptrans/calculus.hpp"
#include "ptrans/continuity.hpp"
#include "ptrans/lattice.hpp"
#include "ptrans/measure.hpp"
#include "ptrans/solver.hpp"

using namespace ptrans;

static double fisher_path(const ConfigLattice& lat, const CEPath& p) {
  double acc = 0.0;
  for (int k = 0; k < intervals(p); ++k) {
    const double dt = p.times[k + 1] - p.times[k];
    acc += dt * fisher_information(lat, midpoint_density(p, k));
  }
  return acc;
}

int main(int argc, char**) {
  ConfigLattice lat(SiteSpace{{1.0, 0.7}, {2, 2}});  // 9 states, 18 slots
  const Density pi = poisson_density(lat);
  const Density mua = exp_perturbed_density(lat, 11, 0.8);
  const Density mub = exp_perturbed_density(lat, 7, 0.6);

  SolverConfig cfg;
  cfg.K = 16;

  // symmetry + feasibility + value
  {
    const SolveResult ab = solve_distance(lat, mua, mub, cfg);
    const SolveResult ba = solve_distance(lat, mub, mua, cfg);
    std::printf("sym: ab %.12f ba %.12f |d| %.3e kkt %.2e/%.2e conv %d%d\n",
                ab.value, ba.value, std::fabs(ab.value - ba.value),
                ab.report.kkt_residual, ba.report.kkt_residual,
                int(ab.report.converged), int(ba.report.converged));
    std::printf("     feas %.2e stat %.2e inner %ld\n", ab.report.feasibility,
                ab.report.stationarity, ab.report.inner_iterations);
  }

  // equal endpoints
  {
    const SolveResult r = solve_distance(lat, mua, mua, cfg);
    double wmax = 0.0;
    for (const auto& f : r.path.fluxes)
      for (double a : f.atoms) wmax = std::max(wmax, std::fabs(a));
    std::printf("same: value %.3e max|atom| %.3e conv %d\n", r.value, wmax,
                int(r.report.converged));
  }

  // upper-bound soundness vs an explicit feasible competitor
  {
    const SolveResult r = solve_distance(lat, pi, mua, cfg);
    CEPath fwd = ou_path(lat, mua, 3.0, 64);
    // reverse: from near-pi to mua is not exactly endpoint-matched; compare
    // instead against action of the solver path, plus benchmark ou action
    std::printf("ub: W2(pi,mua) %.9f action(path) %.9f ou_action %.9f\n",
                r.value, action(lat, r.path), action(lat, fwd));
  }

  // entropic: eps = 0 equality, monotonicity, slope
  {
    const SolveResult w = solve_distance(lat, mua, mub, cfg);
    const SolveResult j0 = solve_entropic(lat, mua, mub, 0.0, cfg);
    std::printf("eps0: |J0 - W2| %.3e\n", std::fabs(j0.value - w.value));
    double prev = w.value;
    for (double eps : {1e-4, 1e-2, 0.1}) {
      const SolveResult j = solve_entropic(lat, mua, mub, eps, cfg);
      const double recomputed = action_entropic(lat, j.path, eps);
      std::printf(
          "eps %.0e: J %.9f >=prev %d recomp|d| %.3e stat %.2e conv %d "
          "fisher_path %.6f slope %.6f\n",
          eps, j.value, int(j.value >= prev - 1e-12),
          std::fabs(recomputed - j.value), j.report.stationarity,
          int(j.report.converged), fisher_path(lat, j.path),
          (j.value - w.value) / eps);
      prev = j.value;
    }
  }

  // dirac -> pi with both inits
  {
    const Density d0 = dirac_density(lat, {0, 0});
    SolverConfig c2 = cfg;
    const SolveResult lin = solve_distance(lat, d0, pi, c2);
    c2.init = InitMode::OU_BRIDGE;
    const SolveResult brg = solve_distance(lat, d0, pi, c2);
    std::printf("dirac->pi: linear %.9f (conv %d, inner %ld) bridge %.9f "
                "(conv %d, inner %ld)\n",
                lin.value, int(lin.report.converged),
                lin.report.inner_iterations, brg.value,
                int(brg.report.converged), brg.report.inner_iterations);
    // entropic from a dirac endpoint (tests the boundary blend rescue)
    const SolveResult je = solve_entropic(lat, d0, pi, 1e-2, cfg);
    std::printf("dirac entropic: J %.9f conv %d stat %.2e\n", je.value,
                int(je.report.converged), je.report.stationarity);
  }

  // geodesic: projection + speed profile
  {
    const GeodesicResult g = geodesic(lat, mua, mub, cfg);
    const std::vector<double> sp = path_speed(lat, g.path);
    double lo = 1e300, hi = 0.0;
    for (double s : sp) { lo = std::min(lo, s); hi = std::max(hi, s); }
    std::printf("geo: obj %.9f base-feas %.2e sing %d speed [%.6f, %.6f] "
                "spread %.3e\n",
                g.report.objective, g.report.feasibility,
                int(g.projection_singular), lo, hi, (hi - lo) / hi);
    // idempotence
    const Density mid = midpoint_density(g.path, 3);
    const ProjectionResult p1 = project_gradient(lat, mid, g.path.fluxes[3]);
    double dmax = 0.0;
    for (std::size_t e = 0; e < p1.flux.atoms.size(); ++e)
      dmax = std::max(dmax,
                      std::fabs(p1.flux.atoms[e] - g.path.fluxes[3].atoms[e]));
    std::printf("geo: idempotence %.3e sing %d\n", dmax, int(p1.singular));
  }

  // refine guards
  {
    const SolverReport zero = refine(lat, mua, mua, {4, 8}, cfg);
    std::printf("refine-zero: extrap %.3e err %.3e order %.2f\n",
                zero.extrapolated, zero.error_estimate, zero.order);
  }
  (void)argc;
  return 0;
}
