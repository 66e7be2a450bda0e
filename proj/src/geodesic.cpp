#include <cmath>
#include <vector>

#include "ptrans/calculus.hpp"
#include "ptrans/parallel.hpp"
#include "ptrans/solver.hpp"

namespace ptrans {
namespace {

// Weighted graph Laplacian phi -> div(q D phi); positive semidefinite in
// the unweighted pairing, kernel spanned by the indicators of q-connected
// components.
void laplacian_apply(const ConfigLattice& lat, const EdgeField& q,
                     const Observable& phi, EdgeField& scratch,
                     Observable& out) {
  const std::size_t S = lat.states();
  parallel_for(lat.slots(), [&](std::size_t e) {
    const int x = static_cast<int>(e / S);
    const std::size_t s = e % S;
    scratch[e] =
        lat.open(s, x) ? q[e] * (phi[lat.up(s, x)] - phi[s]) : 0.0;
  });
  parallel_for(S, [&](std::size_t s) {
    double acc = 0.0;
    for (int x = 0; x < lat.dim(); ++x) {
      if (lat.occ(s, x) > 0) acc += scratch[lat.slot(x, lat.down(s, x))];
      if (lat.open(s, x)) acc -= scratch[lat.slot(x, s)];
    }
    out[s] = acc;
  });
}

void remove_mean(std::vector<double>& v) {
  const double mean = det_sum(v) / static_cast<double>(v.size());
  parallel_for(v.size(), [&](std::size_t i) { v[i] -= mean; });
}

}  // namespace

ProjectionResult project_gradient(const ConfigLattice& lat, const Density& mid,
                                  const FluxMeasure& nu) {
  const std::size_t S = lat.states();
  const std::size_t E = lat.slots();
  ProjectionResult out;
  out.potential.assign(S, 0.0);
  out.flux.atoms.assign(E, 0.0);

  EdgeField q = rho_hat(lat, mid);
  parallel_for(E, [&](std::size_t e) {
    q[e] *= lat.pim(static_cast<int>(e / S), e % S);
  });

  Observable b = flux_divergence(lat, nu);
  remove_mean(b);
  const double bn = std::sqrt(det_dot(b, b));
  if (bn == 0.0) return out;

  Observable phi(S, 0.0), r = b, p = b, Ap(S, 0.0);
  EdgeField scratch(E, 0.0);
  double rr = det_dot(r, r);
  const std::size_t maxit = 10 * S + 100;
  bool converged = false;
  for (std::size_t it = 0; it < maxit; ++it) {
    if (std::sqrt(rr) <= 1e-12 * bn) {
      converged = true;
      break;
    }
    laplacian_apply(lat, q, p, scratch, Ap);
    const double pAp = det_dot(p, Ap);
    if (pAp <= 0.0) break;
    const double alpha = rr / pAp;
    parallel_for(S, [&](std::size_t s) {
      phi[s] += alpha * p[s];
      r[s] -= alpha * Ap[s];
    });
    remove_mean(r);
    const double rr2 = det_dot(r, r);
    parallel_for(S, [&](std::size_t s) { p[s] = r[s] + (rr2 / rr) * p[s]; });
    rr = rr2;
  }
  converged = converged || std::sqrt(rr) <= 1e-12 * bn;
  out.singular = !converged;
  remove_mean(phi);
  out.potential = phi;
  parallel_for(E, [&](std::size_t e) {
    const int x = static_cast<int>(e / S);
    const std::size_t s = e % S;
    out.flux.atoms[e] =
        lat.open(s, x) ? q[e] * (phi[lat.up(s, x)] - phi[s]) : 0.0;
  });
  return out;
}

GeodesicResult geodesic(const ConfigLattice& lat, const Density& mu0,
                        const Density& mu1, const SolverConfig& cfg) {
  SolveResult base = solve_distance(lat, mu0, mu1, cfg);
  GeodesicResult out;
  out.path = std::move(base.path);
  out.report = std::move(base.report);
  const int K = intervals(out.path);
  for (int k = 0; k < K; ++k) {
    const Density mid = midpoint_density(out.path, k);
    ProjectionResult pr =
        project_gradient(lat, mid, out.path.fluxes[static_cast<std::size_t>(k)]);
    out.projection_singular = out.projection_singular || pr.singular;
    out.path.fluxes[static_cast<std::size_t>(k)] = std::move(pr.flux);
  }
  // the projection preserves each interval divergence up to the linear
  // solve's tolerance; re-report the path as returned
  double feas = 0.0;
  for (int k = 0; k < K; ++k) {
    const Observable div =
        flux_divergence(lat, out.path.fluxes[static_cast<std::size_t>(k)]);
    const auto& ra = out.path.densities[static_cast<std::size_t>(k)].rho;
    const auto& rb = out.path.densities[static_cast<std::size_t>(k) + 1].rho;
    const double dt = out.path.times[static_cast<std::size_t>(k) + 1] -
                      out.path.times[static_cast<std::size_t>(k)];
    for (std::size_t s = 0; s < lat.states(); ++s)
      feas = std::max(feas,
                      std::fabs(rb[s] - ra[s] - dt * div[s] / lat.pi(s)));
  }
  out.report.feasibility = feas;
  out.report.kkt_residual = out.report.stationarity + feas;
  out.report.objective = action(lat, out.path);
  return out;
}

}  // namespace ptrans
