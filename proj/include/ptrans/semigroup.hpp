#pragma once

#include "ptrans/measure.hpp"

namespace ptrans {

enum class KernelMethod { MEHLER, EXPM };

// Product-form transition operator: one (cap+1) x (cap+1) row-stochastic
// matrix per site, row = current occupancy. Two independent constructions
// exist; EXPM is exactly consistent with the censored generator and is the
// one inequality checks run on, MEHLER cross-validates it.
struct SemigroupOperator {
  double t = 0.0;
  KernelMethod method = KernelMethod::EXPM;
  std::vector<std::vector<double>> site_kernels;  // [x], row-major

  double entry(int x, int n, int k, int cap) const {
    return site_kernels[static_cast<std::size_t>(x)]
                       [static_cast<std::size_t>(n) *
                            (static_cast<std::size_t>(cap) + 1) +
                        static_cast<std::size_t>(k)];
  }
};

// Thinning-plus-injection kernel: row n is the law of
// Binomial(n, e^{-t}) + Poisson((1 - e^{-t}) m_x), with all mass at or above
// the cap collected into the cap column (computed as the exact remainder,
// so rows sum to 1 by construction).
SemigroupOperator mehler_kernel(const SiteSpace& sites, double t);

// exp(t Q) for the censored birth-death generator (birth m_x below the cap,
// death n), via eigendecomposition of the pi-symmetrized tridiagonal form;
// reversible w.r.t. the truncated reference up to round-off.
SemigroupOperator expm_kernel(const SiteSpace& sites, double t);

// Tensor-product application, one line sweep per site. Cost O(states * cap)
// per site.
Observable semigroup_apply(const ConfigLattice& lat,
                           const SemigroupOperator& op, const Observable& f);

// Dual action on measures: mu = rho pi evolves to (P_t rho) pi. Round-off
// can leave entries of order -1e-16 where the true density vanishes; they
// are clamped to zero and the result renormalized.
Density dual_apply(const ConfigLattice& lat, const SemigroupOperator& op,
                   const Density& mu);

// Diagnostics.
double row_sum_residual(const SemigroupOperator& op);                      // max |row sum - 1|
double reversibility_residual(const ConfigLattice& lat,
                              const SemigroupOperator& op);                // max |pi_n T(n,k) - pi_k T(k,n)|
double stationarity_residual(const ConfigLattice& lat,
                             const SemigroupOperator& op);                 // max |(pi T)(k) - pi(k)|

// Worst pi-row-weighted entry discrepancy between two kernels,
// max over sites, rows n, columns k of pi_x(n) |T_a(n,k) - T_b(n,k)|.
// Row weighting reflects how kernel rows enter every integral against the
// reference; unweighted rows at occupancies the reference never reaches
// differ by the (documented) clipping of the thinning kernel.
double kernel_agreement(const ConfigLattice& lat, const SemigroupOperator& a,
                        const SemigroupOperator& b);

// Commutation residual: max over edges (eta, x) with eta + delta_x at least
// `margin` levels below every cap of
//   | D_x(P_t f)(eta) - e^{-t} (P_t D_x f)(eta) |,
// where P_t acts on D_x f slot-slice by slot-slice in the eta variable.
double be_commutation_residual(const ConfigLattice& lat, const Observable& f,
                               double t, int margin,
                               KernelMethod method = KernelMethod::MEHLER);

}  // namespace ptrans
