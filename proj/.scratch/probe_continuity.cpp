#include <cmath>
#include <cstdio>

#include "ptrans/calculus.hpp"
#include "ptrans/continuity.hpp"
#include "ptrans/measure.hpp"
#include "ptrans/semigroup.hpp"

using namespace ptrans;

int main() {
  ConfigLattice lat({{1.0}, {16}});
  const Density mu0 = exp_perturbed_density(lat, 42, 2.0);
  const double T = 1.0;

  // ce residual order
  const CEPath p50 = ou_path(lat, mu0, T, 50);
  const CEPath p100 = ou_path(lat, mu0, T, 100);
  const CEPath p200 = ou_path(lat, mu0, T, 200);
  const double r50 = ce_residual(lat, p50);
  const double r100 = ce_residual(lat, p100);
  const double r200 = ce_residual(lat, p200);
  std::printf("ce residual: K=50 %.6e K=100 %.6e K=200 %.6e ratios %.3f %.3f\n",
              r50, r100, r200, r50 / r100, r100 / r200);

  // entropy production order
  const auto e50 = entropy_production_check(lat, p50);
  const auto e100 = entropy_production_check(lat, p100);
  const auto e200 = entropy_production_check(lat, p200);
  std::printf("entropy prod: K=50 %.6e K=100 %.6e K=200 %.6e ratios %.3f %.3f\n",
              e50.residual, e100.residual, e200.residual,
              e50.residual / e100.residual, e100.residual / e200.residual);
  std::printf("entropy lhs %.12f rhs %.12f\n", e200.lhs, e200.rhs);

  // speed vs fisher at midpoints, K=50
  double worst_rel = 0.0;
  const auto speed = path_speed(lat, p50);
  for (int k = 0; k < 50; ++k) {
    const double tm = T * (k + 0.5) / 50;
    const Density mid = dual_apply(lat, expm_kernel(lat.sites(), tm), mu0);
    const double fi = std::sqrt(fisher_information(lat, mid));
    worst_rel = std::max(worst_rel, std::fabs(speed[(size_t)k] - fi) / fi);
  }
  std::printf("speed vs sqrt(fisher): worst rel %.3e\n", worst_rel);

  // intensity evolution: bound tightness + exact drift for dirac start
  const auto ie = intensity_evolution_check(lat, p200);
  std::printf("intensity: worst %.3e bound %.3e pass %d\n", ie.worst_residual,
              ie.bound, (int)ie.pass);
  const CEPath pd = ou_path(lat, dirac_density(lat, {0}), T, 200);
  double cum = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double dt = pd.times[(size_t)k + 1] - pd.times[(size_t)k];
    for (std::size_t s = 0; s < lat.states(); ++s)
      cum += dt * pd.fluxes[(size_t)k].atoms[lat.slot(0, s)];
  }
  std::printf("dirac cum flux %.10f vs 1-e^-T %.10f diff %.3e\n", cum,
              1.0 - std::exp(-T), std::fabs(cum - (1.0 - std::exp(-T))));
  const auto ied = intensity_evolution_check(lat, pd);
  std::printf("dirac intensity: worst %.3e bound %.3e pass %d\n",
              ied.worst_residual, ied.bound, (int)ied.pass);

  // push: composition, commutation with the flow, residual growth, action
  const double eps = 0.3;
  const CEPath pushed = push_semigroup(lat, p100, eps);
  const CEPath two = push_semigroup(lat, push_semigroup(lat, p100, 0.1), 0.2);
  double comp = 0.0;
  for (std::size_t k = 0; k < pushed.fluxes.size(); ++k)
    for (std::size_t e = 0; e < lat.slots(); ++e)
      comp = std::max(comp, std::fabs(pushed.fluxes[k].atoms[e] -
                                      two.fluxes[k].atoms[e]));
  for (std::size_t k = 0; k < pushed.densities.size(); ++k)
    for (std::size_t s = 0; s < lat.states(); ++s)
      comp = std::max(comp, std::fabs(pushed.densities[k].rho[s] -
                                      two.densities[k].rho[s]));
  std::printf("push composition sup diff %.3e\n", comp);

  const Density mu_eps = dual_apply(lat, expm_kernel(lat.sites(), eps), mu0);
  const CEPath direct = ou_path(lat, mu_eps, T, 100);
  double dens_diff = 0.0, atom_diff = 0.0;
  for (std::size_t k = 0; k < pushed.densities.size(); ++k)
    for (std::size_t s = 0; s < lat.states(); ++s)
      dens_diff = std::max(dens_diff, std::fabs(pushed.densities[k].rho[s] -
                                                direct.densities[k].rho[s]));
  for (std::size_t k = 0; k < pushed.fluxes.size(); ++k)
    for (std::size_t e = 0; e < lat.slots(); ++e)
      atom_diff = std::max(atom_diff, std::fabs(pushed.fluxes[k].atoms[e] -
                                                direct.fluxes[k].atoms[e]));
  std::printf("push vs flow-of-pushed-start: dens %.3e atoms %.3e\n",
              dens_diff, atom_diff);
  std::printf("push residual %.3e vs input %.3e (x%.2f)\n",
              ce_residual(lat, pushed), r100, ce_residual(lat, pushed) / r100);
  std::printf("action in %.10f pushed %.10f e^-2eps*in %.10f ok %d\n",
              action(lat, p100), action(lat, pushed),
              std::exp(-2 * eps) * action(lat, p100),
              (int)(action(lat, pushed) <=
                    std::exp(-2 * eps) * action(lat, p100) + 1e-10));

  // reparametrize: speed-up clock, length invariance, residual
  const auto lam2 = [](double s) { return 2.0 * s; };
  const CEPath fast = reparametrize(lat, p100, lam2, T / 2, 50);
  auto length = [&](const CEPath& p) {
    double len = 0.0;
    const auto sp = path_speed(lat, p);
    for (std::size_t k = 0; k < sp.size(); ++k)
      len += (p.times[k + 1] - p.times[k]) * sp[k];
    return len;
  };
  std::printf("length in %.12f fast %.12f rel diff %.3e\n", length(p100),
              length(fast),
              std::fabs(length(p100) - length(fast)) / length(p100));
  std::printf("fast residual %.3e vs input %.3e\n", ce_residual(lat, fast),
              r100);
  const auto lamq = [T](double s) { return s * s / T; };
  const CEPath quad = reparametrize(lat, p100, lamq, T, 80);
  std::printf("quad-clock residual %.3e\n", ce_residual(lat, quad));

  // concatenation of two half flows
  const Density mu_half =
      dual_apply(lat, expm_kernel(lat.sites(), T / 2), mu0);
  const CEPath a = ou_path(lat, mu0, T / 2, 50);
  const CEPath b = ou_path(lat, mu_half, T / 2, 50);
  const CEPath ab = concatenate(lat, a, b);
  std::printf("concat residual %.3e vs max inputs %.3e\n",
              ce_residual(lat, ab),
              std::max(ce_residual(lat, a), ce_residual(lat, b)));
  return 0;
}
