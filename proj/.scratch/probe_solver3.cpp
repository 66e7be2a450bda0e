#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ptrans/calculus.hpp"
#include "ptrans/continuity.hpp"
#include "ptrans/lattice.hpp"
#include "ptrans/measure.hpp"
#include "ptrans/solver.hpp"

using namespace ptrans;

int main() {
  ConfigLattice lat(SiteSpace{{1.0, 0.7}, {2, 2}});
  const Density pi = poisson_density(lat);
  const Density mua = exp_perturbed_density(lat, 11, 0.8);

  // upper bound: solver value <= action of an explicit feasible path with
  // the same endpoints
  {
    const CEPath ou = ou_path(lat, mua, 1.0, 32);
    SolverConfig cfg;
    cfg.K = 16;
    const SolveResult r = solve_distance(lat, mua, ou.densities.back(), cfg);
    std::printf("ub: solver %.12f ou_action %.12f margin %.3e conv %d\n",
                r.value, action(lat, ou), action(lat, ou) - r.value,
                int(r.report.converged));
  }

  // m = 0.5 two-state refine vs oracle
  {
    ConfigLattice l1(SiteSpace{{0.5}, {1}});
    const Density d0 = dirac_density(l1, {0});
    const Density d1 = dirac_density(l1, {1});
    SolverConfig cfg;
    const SolverReport rep = refine(l1, d0, d1, {16, 32, 64}, cfg);
    const double w = 1.839804566244659156;
    std::printf("m05: order %.4f extrap %.12f oracle2 %.12f rel %.3e "
                "err_est %.3e mono %d conv %d\n",
                rep.order, rep.extrapolated, w * w,
                std::fabs(rep.extrapolated - w * w) / (w * w),
                rep.error_estimate, int(rep.monotone), int(rep.converged));
  }

  // projection strictly removes a circulation
  {
    const Density mid = mua;
    EdgeField w(lat.slots(), 0.0);
    // gradient part: potential phi = occupancy of site 0
    Observable phi(lat.states(), 0.0);
    for (std::size_t s = 0; s < lat.states(); ++s) phi[s] = lat.occ(s, 0);
    const EdgeField th = rho_hat(lat, mid);
    FluxMeasure nu{EdgeField(lat.slots(), 0.0)};
    for (int x = 0; x < lat.dim(); ++x)
      for (std::size_t s = 0; s < lat.states(); ++s)
        if (lat.open(s, x)) {
          const std::size_t e = lat.slot(x, s);
          nu.atoms[e] =
              th[e] * lat.pim(x, s) * (phi[lat.up(s, x)] - phi[s]);
        }
    // circulation around the bottom plaquette (n0, n1) in {0,1}^2
    const std::size_t s00 = lat.encode({0, 0});
    const std::size_t s10 = lat.encode({1, 0});
    const std::size_t s01 = lat.encode({0, 1});
    FluxMeasure curl = nu;
    const double c = 0.05;
    curl.atoms[lat.slot(0, s00)] += c;
    curl.atoms[lat.slot(1, s10)] += c;
    curl.atoms[lat.slot(0, s01)] -= c;
    curl.atoms[lat.slot(1, s00)] -= c;
    const Observable dn = flux_divergence(lat, nu);
    const Observable dc = flux_divergence(lat, curl);
    double ddiff = 0.0;
    for (std::size_t s = 0; s < lat.states(); ++s)
      ddiff = std::max(ddiff, std::fabs(dn[s] - dc[s]));
    const ProjectionResult pr = project_gradient(lat, mid, curl);
    const Observable dp = flux_divergence(lat, pr.flux);
    double dres = 0.0;
    for (std::size_t s = 0; s < lat.states(); ++s)
      dres = std::max(dres, std::fabs(dp[s] - dc[s]));
    double rec = 0.0;
    for (std::size_t e = 0; e < lat.slots(); ++e)
      rec = std::max(rec, std::fabs(pr.flux.atoms[e] - nu.atoms[e]));
    std::printf("curl: div(curl-part) %.3e L(curl'd) %.9f L(proj) %.9f "
                "L(grad) %.9f recover %.3e divres %.3e sing %d\n",
                ddiff, lagrangian(lat, mid, curl), lagrangian(lat, mid, pr.flux),
                lagrangian(lat, mid, nu), rec, dres, int(pr.singular));
  }

  // cheap dirac->pi (test-budget sizing)
  {
    const Density d0 = dirac_density(lat, {0, 0});
    for (int K : {8, 16}) {
      SolverConfig cfg;
      cfg.K = K;
      const SolveResult lin = solve_distance(lat, d0, pi, cfg);
      cfg.init = InitMode::OU_BRIDGE;
      const SolveResult brg = solve_distance(lat, d0, pi, cfg);
      std::printf("K=%d dirac: lin %.9f (%ld it) brg %.9f (%ld it) |d| %.2e\n",
                  K, lin.value, lin.report.inner_iterations, brg.value,
                  brg.report.inner_iterations,
                  std::fabs(lin.value - brg.value));
    }
  }

  // throws
  {
    int caught = 0;
    try { two_point_oracle(-1.0, 0.0, 1.0); } catch (const std::domain_error&) { ++caught; }
    try { two_point_oracle(1.0, -0.1, 1.0); } catch (const std::domain_error&) { ++caught; }
    try { solve_entropic(lat, mua, pi, -1e-3, SolverConfig{}); } catch (const std::domain_error&) { ++caught; }
    try { SolverConfig c; c.K = 7; c.init = InitMode::OU_BRIDGE; solve_distance(lat, mua, pi, c); } catch (const std::invalid_argument&) { ++caught; }
    try { refine(lat, mua, pi, {8}, SolverConfig{}); } catch (const std::invalid_argument&) { ++caught; }
    try { refine(lat, mua, pi, {8, 8}, SolverConfig{}); } catch (const std::invalid_argument&) { ++caught; }
    try { SolverConfig c; c.K = 0; solve_distance(lat, mua, pi, c); } catch (const std::invalid_argument&) { ++caught; }
    std::printf("throws: %d/7\n", caught);
  }
  return 0;
}
