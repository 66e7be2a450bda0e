#include <cstdio>
#include "ptrans/lattice.hpp"
#include "ptrans/measure.hpp"
#include "ptrans/solver.hpp"
using namespace ptrans;
int main() {
  ConfigLattice lat(SiteSpace{{1.0}, {1}});
  SolverConfig cfg; cfg.K = 1;
  const SolveResult r = solve_distance(lat, dirac_density(lat, {0}), dirac_density(lat, {1}), cfg);
  std::printf("K1: value %.12f conv %d feas %.2e iters %ld\n", r.value, int(r.report.converged), r.report.feasibility, r.report.inner_iterations);
  SolverConfig c4; c4.K = 4;
  const SolveResult r4 = solve_distance(lat, dirac_density(lat, {0}), dirac_density(lat, {1}), c4);
  std::printf("K4: value %.12f conv %d\n", r4.value, int(r4.report.converged));
  return 0;
}
