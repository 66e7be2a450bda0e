#pragma once

#include "ptrans/measure.hpp"

namespace ptrans {

// Logarithmic mean theta(s, t) = (s - t)/(log s - log t), extended by
// theta(s, s) = s and theta(s, 0) = theta(0, t) = 0.
double log_mean(double s, double t);

// Partial derivatives of the logarithmic mean for s, t > 0; both equal 1/2
// on the diagonal.
void log_mean_partials(double s, double t, double& ds, double& dt);

// D_x F(eta) = F(eta + delta_x) - F(eta) on open slots.
EdgeField difference(const ConfigLattice& lat, const Observable& f);

// Adjoint of D under pi (x) m:
//   div u(eta) = sum_x eta_x u(eta - delta_x, x) - sum_x m_x u(eta, x),
// where the second sum runs over open slots only.
Observable skorokhod_div(const ConfigLattice& lat, const EdgeField& u);

// Birth-death generator with births censored at the cap; equals -div(D F).
Observable generator_apply(const ConfigLattice& lat, const Observable& f);

// Relative entropy sum rho log rho pi, with 0 log 0 = 0.
double entropy(const ConfigLattice& lat, const Density& mu);

// Fisher information sum over open slots of
// (rho(head) - rho(tail)) (log rho(head) - log rho(tail)) pi m. A slot with
// one endpoint zero and the other positive contributes +infinity.
double fisher_information(const ConfigLattice& lat, const Density& mu);

// Same sum, but entries below `floor` are treated as outside the support
// and skipped. Used on semigroup-evolved densities, whose far-tail entries
// are eigendecomposition round-off of either sign; the neglected true
// contribution is bounded by floor * |log floor| per slot.
double fisher_information_guarded(const ConfigLattice& lat, const Density& mu,
                                  double floor);

// Edge field theta(rho(eta), rho(eta + delta_x)).
EdgeField rho_hat(const ConfigLattice& lat, const Density& mu);

// Kinetic energy of a flux at a density:
//   sum over slots of atoms^2 / (rho_hat * pi m),
// with 0/0 = 0 and a nonzero atom over rho_hat = 0 giving +infinity.
double lagrangian(const ConfigLattice& lat, const Density& mu,
                  const FluxMeasure& nu);

// Per-site mass bound |nu|(Y x {x}) <= sqrt((m_x + I_mu(x))/2 * lagrangian).
struct FluxMassBoundReport {
  std::vector<double> lhs;  // per site, total variation of nu on that site
  std::vector<double> rhs;
  double worst_slack = 0.0;  // min over sites of rhs - lhs
  bool lagrangian_finite = true;
  bool pass = false;
};

FluxMassBoundReport flux_mass_bound_check(const ConfigLattice& lat,
                                          const Density& mu,
                                          const FluxMeasure& nu);

// Deterministic inner products and integrals.
double integral_pi(const ConfigLattice& lat, const Observable& f);
double inner_pi(const ConfigLattice& lat, const Observable& f,
                const Observable& g);
double inner_pim(const ConfigLattice& lat, const EdgeField& u,
                 const EdgeField& v);

}  // namespace ptrans
