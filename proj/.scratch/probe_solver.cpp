#include <cmath>
#include <cstdio>

#include "ptrans/calculus.hpp"
#include "ptrans/continuity.hpp"
#include "ptrans/lattice.hpp"
#include "ptrans/measure.hpp"
#include "ptrans/solver.hpp"

using namespace ptrans;

int main() {
  // --- oracle vs frozen constants ---
  struct Row { double m, b0, b1, want; };
  const Row rows[] = {
      {1.0, 0.0, 1.0, 1.558707451453659319},
      {0.5, 0.0, 1.0, 1.839804566244659156},
      {1.0, 0.0, 0.5, 0.77935372572682965949},
      {2.0, 0.25, 0.75, 0.59780124345003405109},
  };
  for (const auto& r : rows) {
    const double got = two_point_oracle(r.m, r.b0, r.b1);
    std::printf("oracle m=%.2f [%.2f,%.2f]: got %.18f want %.18f rel %.3e\n",
                r.m, r.b0, r.b1, got, r.want,
                std::fabs(got - r.want) / r.want);
  }

  // --- two-point solver ladder vs prototype ---
  ConfigLattice lat(SiteSpace{{1.0}, {1}});
  Density d0 = dirac_density(lat, {0});
  Density d1 = dirac_density(lat, {1});
  const double protoW2[] = {2.405792028385, 2.419037018249, 2.424904621564};
  int i = 0;
  for (int K : {16, 32, 64}) {
    SolverConfig cfg;
    cfg.K = K;
    const SolveResult r = solve_distance(lat, d0, d1, cfg);
    std::printf(
        "K=%2d: W2 %.12f proto %.12f diff %+.3e conv %d feas %.2e stat %.2e "
        "outer %d inner %ld\n",
        K, r.value, protoW2[i], r.value - protoW2[i], int(r.report.converged),
        r.report.feasibility, r.report.stationarity,
        r.report.outer_iterations, r.report.inner_iterations);
    ++i;
  }

  // --- refine ---
  SolverConfig cfg;
  const SolverReport rep = refine(lat, d0, d1, {16, 32, 64}, cfg);
  const double oracleW2 = 1.558707451453659319 * 1.558707451453659319;
  std::printf(
      "refine: order %.4f extrap %.12f oracle %.12f rel %.3e err_est %.3e "
      "monotone %d conv %d\n",
      rep.order, rep.extrapolated, oracleW2,
      std::fabs(rep.extrapolated - oracleW2) / oracleW2, rep.error_estimate,
      int(rep.monotone), int(rep.converged));
  return 0;
}
