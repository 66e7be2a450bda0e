#include "ptrans/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptrans/calculus.hpp"
#include "ptrans/parallel.hpp"
#include "ptrans/semigroup.hpp"

namespace ptrans {

int intervals(const CEPath& path) {
  return static_cast<int>(path.fluxes.size());
}

void validate_path(const ConfigLattice& lat, const CEPath& path) {
  const std::size_t k = path.fluxes.size();
  if (path.times.size() != k + 1 || path.densities.size() != k + 1 || k == 0)
    throw std::invalid_argument("path: expected K fluxes with K+1 knots");
  for (std::size_t j = 0; j + 1 < path.times.size(); ++j)
    if (!(path.times[j + 1] > path.times[j]))
      throw std::invalid_argument("path: knot times must increase");
  for (const auto& mu : path.densities)
    if (!is_probability(lat, mu, 1e-9))
      throw std::invalid_argument("path: knot is not a probability density");
  for (const auto& nu : path.fluxes)
    if (nu.atoms.size() != lat.slots())
      throw std::invalid_argument("path: flux table has wrong size");
}

FluxMeasure flux_from_w(const ConfigLattice& lat, const EdgeField& w) {
  FluxMeasure nu{EdgeField(lat.slots(), 0.0)};
  for (int x = 0; x < lat.dim(); ++x)
    parallel_for(lat.states(), [&](std::size_t s) {
      if (lat.open(s, x))
        nu.atoms[lat.slot(x, s)] = w[lat.slot(x, s)] * lat.pim(x, s);
    });
  return nu;
}

EdgeField w_from_flux(const ConfigLattice& lat, const FluxMeasure& nu) {
  EdgeField w(lat.slots(), 0.0);
  for (int x = 0; x < lat.dim(); ++x)
    parallel_for(lat.states(), [&](std::size_t s) {
      if (lat.open(s, x))
        w[lat.slot(x, s)] = nu.atoms[lat.slot(x, s)] / lat.pim(x, s);
    });
  return w;
}

Observable flux_divergence(const ConfigLattice& lat, const FluxMeasure& nu) {
  Observable out(lat.states(), 0.0);
  parallel_for(lat.states(), [&](std::size_t s) {
    double v = 0.0;
    for (int x = 0; x < lat.dim(); ++x) {
      if (lat.occ(s, x) > 0) v += nu.atoms[lat.slot(x, lat.down(s, x))];
      if (lat.open(s, x)) v -= nu.atoms[lat.slot(x, s)];
    }
    out[s] = v;
  });
  return out;
}

double ce_residual(const ConfigLattice& lat, const CEPath& path) {
  const int k = intervals(path);
  double worst = 0.0;
  for (int j = 0; j < k; ++j) {
    const double dt = path.times[static_cast<std::size_t>(j) + 1] -
                      path.times[static_cast<std::size_t>(j)];
    const Observable div = flux_divergence(lat, path.fluxes[static_cast<std::size_t>(j)]);
    const auto& r0 = path.densities[static_cast<std::size_t>(j)].rho;
    const auto& r1 = path.densities[static_cast<std::size_t>(j) + 1].rho;
    for (std::size_t s = 0; s < lat.states(); ++s)
      worst = std::max(
          worst, std::fabs((r1[s] - r0[s]) * lat.pi(s) - dt * div[s]));
  }
  return worst;
}

CEPath ou_path(const ConfigLattice& lat, const Density& mu0, double T, int K) {
  if (!(T > 0.0) || K < 1)
    throw std::invalid_argument("ou_path: need T > 0 and K >= 1");
  CEPath path;
  path.times.resize(static_cast<std::size_t>(K) + 1);
  path.densities.resize(static_cast<std::size_t>(K) + 1);
  path.fluxes.resize(static_cast<std::size_t>(K));
  for (int k = 0; k <= K; ++k) {
    const double t = T * k / K;
    path.times[static_cast<std::size_t>(k)] = t;
    path.densities[static_cast<std::size_t>(k)] =
        k == 0 ? mu0 : dual_apply(lat, expm_kernel(lat.sites(), t), mu0);
  }
  for (int k = 0; k < K; ++k) {
    const double tm = T * (k + 0.5) / K;
    const Density mid = dual_apply(lat, expm_kernel(lat.sites(), tm), mu0);
    const EdgeField grad = difference(lat, mid.rho);
    FluxMeasure& nu = path.fluxes[static_cast<std::size_t>(k)];
    nu.atoms.assign(lat.slots(), 0.0);
    for (int x = 0; x < lat.dim(); ++x)
      parallel_for(lat.states(), [&](std::size_t s) {
        if (lat.open(s, x))
          nu.atoms[lat.slot(x, s)] = -grad[lat.slot(x, s)] * lat.pim(x, s);
      });
  }
  return path;
}

CEPath push_semigroup(const ConfigLattice& lat, const CEPath& path,
                      double eps) {
  if (eps < 0.0) throw std::domain_error("push_semigroup: eps must be >= 0");
  if (eps == 0.0) return path;
  const SemigroupOperator op = expm_kernel(lat.sites(), eps);
  const double decay = std::exp(-eps);
  CEPath out;
  out.times = path.times;
  out.densities.reserve(path.densities.size());
  for (const auto& mu : path.densities)
    out.densities.push_back(dual_apply(lat, op, mu));
  out.fluxes.reserve(path.fluxes.size());
  for (const auto& nu : path.fluxes) {
    const EdgeField w = w_from_flux(lat, nu);
    FluxMeasure pushed{EdgeField(lat.slots(), 0.0)};
    for (int x = 0; x < lat.dim(); ++x) {
      Observable slice(lat.states());
      for (std::size_t s = 0; s < lat.states(); ++s)
        slice[s] = w[lat.slot(x, s)];
      const Observable ps = semigroup_apply(lat, op, slice);
      parallel_for(lat.states(), [&](std::size_t s) {
        if (lat.open(s, x))
          pushed.atoms[lat.slot(x, s)] = decay * ps[s] * lat.pim(x, s);
      });
    }
    out.fluxes.push_back(std::move(pushed));
  }
  return out;
}

CEPath reparametrize(const ConfigLattice& lat, const CEPath& path,
                     const std::function<double(double)>& lambda, double S,
                     int knots) {
  if (!(S > 0.0) || knots < 1)
    throw std::invalid_argument("reparametrize: need S > 0 and knots >= 1");
  const int k_in = intervals(path);
  const double t_end = path.times.back();
  std::vector<double> mapped(static_cast<std::size_t>(knots) + 1);
  for (int j = 0; j <= knots; ++j) {
    mapped[static_cast<std::size_t>(j)] = lambda(S * j / knots);
    if (j > 0 && !(mapped[static_cast<std::size_t>(j)] >
                   mapped[static_cast<std::size_t>(j) - 1]))
      throw std::invalid_argument("reparametrize: clock map must increase");
  }
  if (std::fabs(mapped.front() - path.times.front()) > 1e-12 * std::max(1.0, t_end) ||
      std::fabs(mapped.back() - t_end) > 1e-12 * std::max(1.0, t_end))
    throw std::invalid_argument("reparametrize: clock map must span the path");
  mapped.front() = path.times.front();
  mapped.back() = t_end;

  // linear interpolation of knot densities at a mapped time
  auto density_at = [&](double t) -> Density {
    const auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
    int k = static_cast<int>(it - path.times.begin()) - 1;
    k = std::clamp(k, 0, k_in - 1);
    const double t0 = path.times[static_cast<std::size_t>(k)];
    const double t1 = path.times[static_cast<std::size_t>(k) + 1];
    const double a = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
    const auto& r0 = path.densities[static_cast<std::size_t>(k)].rho;
    const auto& r1 = path.densities[static_cast<std::size_t>(k) + 1].rho;
    Density mu{std::vector<double>(lat.states())};
    for (std::size_t s = 0; s < lat.states(); ++s)
      mu.rho[s] = (1.0 - a) * r0[s] + a * r1[s];
    return mu;
  };

  CEPath out;
  out.times.resize(static_cast<std::size_t>(knots) + 1);
  for (int j = 0; j <= knots; ++j)
    out.times[static_cast<std::size_t>(j)] = S * j / knots;
  out.densities.reserve(static_cast<std::size_t>(knots) + 1);
  for (int j = 0; j <= knots; ++j)
    out.densities.push_back(density_at(mapped[static_cast<std::size_t>(j)]));

  out.fluxes.assign(static_cast<std::size_t>(knots),
                    FluxMeasure{EdgeField(lat.slots(), 0.0)});
  for (int j = 0; j < knots; ++j) {
    const double lo = mapped[static_cast<std::size_t>(j)];
    const double hi = mapped[static_cast<std::size_t>(j) + 1];
    const double ds = S / knots;
    auto& atoms = out.fluxes[static_cast<std::size_t>(j)].atoms;
    for (int k = 0; k < k_in; ++k) {
      const double t0 = path.times[static_cast<std::size_t>(k)];
      const double t1 = path.times[static_cast<std::size_t>(k) + 1];
      const double overlap = std::min(hi, t1) - std::max(lo, t0);
      if (overlap <= 0.0) continue;
      const double scale = overlap / ds;
      const auto& in = path.fluxes[static_cast<std::size_t>(k)].atoms;
      parallel_for(lat.slots(),
                   [&](std::size_t e) { atoms[e] += scale * in[e]; });
    }
  }
  return out;
}

CEPath concatenate(const ConfigLattice& lat, const CEPath& a, const CEPath& b) {
  const auto& end_a = a.densities.back().rho;
  const auto& start_b = b.densities.front().rho;
  double gap = 0.0;
  for (std::size_t s = 0; s < lat.states(); ++s)
    gap = std::max(gap, std::fabs(end_a[s] - start_b[s]) * lat.pi(s));
  if (gap > 1e-9)
    throw std::invalid_argument("concatenate: junction densities disagree");
  CEPath out;
  const double ta = a.times.back();
  out.times = a.times;
  for (std::size_t j = 1; j < b.times.size(); ++j)
    out.times.push_back(ta + b.times[j]);
  out.densities = a.densities;
  out.densities.insert(out.densities.end(), b.densities.begin() + 1,
                       b.densities.end());
  out.fluxes = a.fluxes;
  out.fluxes.insert(out.fluxes.end(), b.fluxes.begin(), b.fluxes.end());
  return out;
}

IntensityEvolutionReport intensity_evolution_check(const ConfigLattice& lat,
                                                   const CEPath& path) {
  const int k = intervals(path);
  IntensityEvolutionReport rep;
  const auto i0 = intensity_measure(lat, path.densities.front());
  std::vector<double> cum(static_cast<std::size_t>(lat.dim()), 0.0);
  for (int j = 0; j < k; ++j) {
    const double dt = path.times[static_cast<std::size_t>(j) + 1] -
                      path.times[static_cast<std::size_t>(j)];
    for (int x = 0; x < lat.dim(); ++x) {
      const double* atoms =
          path.fluxes[static_cast<std::size_t>(j)].atoms.data() + lat.slot(x, 0);
      cum[static_cast<std::size_t>(x)] += dt * det_sum(atoms, lat.states());
    }
    const auto ik = intensity_measure(lat, path.densities[static_cast<std::size_t>(j) + 1]);
    for (int x = 0; x < lat.dim(); ++x)
      rep.worst_residual = std::max(
          rep.worst_residual,
          std::fabs(ik[static_cast<std::size_t>(x)] -
                    i0[static_cast<std::size_t>(x)] -
                    cum[static_cast<std::size_t>(x)]));
  }
  // weighting the mass balance by eta_x scales its violation by at most
  // cap * states per step
  double occ_scale = 0.0;
  for (int x = 0; x < lat.dim(); ++x)
    occ_scale = std::max(occ_scale, static_cast<double>(lat.cap(x)));
  rep.bound = std::max(1e-14, k * ce_residual(lat, path) * occ_scale *
                                  static_cast<double>(lat.states()));
  rep.pass = rep.worst_residual <= rep.bound;
  return rep;
}

EntropyProductionReport entropy_production_check(const ConfigLattice& lat,
                                                 const CEPath& path) {
  EntropyProductionReport rep;
  const int k = intervals(path);
  for (int j = 0; j <= k; ++j) {
    double lo = path.densities[static_cast<std::size_t>(j)].rho[0];
    for (double v : path.densities[static_cast<std::size_t>(j)].rho)
      lo = std::min(lo, v);
    if (!(lo > 0.0)) {
      rep.skipped = true;
      rep.reason = "knot density not strictly positive";
      return rep;
    }
  }
  rep.lhs = entropy(lat, path.densities.back()) -
            entropy(lat, path.densities.front());
  double rhs = 0.0;
  for (int j = 0; j < k; ++j) {
    const double dt = path.times[static_cast<std::size_t>(j) + 1] -
                      path.times[static_cast<std::size_t>(j)];
    const Density mid = midpoint_density(path, j);
    Observable logm(lat.states());
    for (std::size_t s = 0; s < lat.states(); ++s)
      logm[s] = std::log(mid.rho[s]);
    const EdgeField dlog = difference(lat, logm);
    const double* atoms = path.fluxes[static_cast<std::size_t>(j)].atoms.data();
    const double* g = dlog.data();
    rhs += dt * det_sum_n(lat.slots(),
                          [atoms, g](std::size_t e) { return atoms[e] * g[e]; });
  }
  rep.rhs = rhs;
  rep.residual = std::fabs(rep.lhs - rep.rhs);
  return rep;
}

std::vector<double> path_speed(const ConfigLattice& lat, const CEPath& path) {
  const int k = intervals(path);
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    out[static_cast<std::size_t>(j)] = std::sqrt(
        lagrangian(lat, midpoint_density(path, j),
                   path.fluxes[static_cast<std::size_t>(j)]));
  return out;
}

double action(const ConfigLattice& lat, const CEPath& path) {
  const int k = intervals(path);
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    const double dt = path.times[static_cast<std::size_t>(j) + 1] -
                      path.times[static_cast<std::size_t>(j)];
    total += dt * lagrangian(lat, midpoint_density(path, j),
                             path.fluxes[static_cast<std::size_t>(j)]);
  }
  return total;
}

double action_entropic(const ConfigLattice& lat, const CEPath& path,
                       double eps) {
  if (eps < 0.0) throw std::domain_error("action_entropic: eps must be >= 0");
  double total = action(lat, path);
  if (eps == 0.0) return total;
  const int k = intervals(path);
  for (int j = 0; j < k; ++j) {
    const double dt = path.times[static_cast<std::size_t>(j) + 1] -
                      path.times[static_cast<std::size_t>(j)];
    total += eps * dt * fisher_information(lat, midpoint_density(path, j));
  }
  return total;
}

Density midpoint_density(const CEPath& path, int k) {
  const auto& r0 = path.densities[static_cast<std::size_t>(k)].rho;
  const auto& r1 = path.densities[static_cast<std::size_t>(k) + 1].rho;
  Density mid{std::vector<double>(r0.size())};
  for (std::size_t s = 0; s < r0.size(); ++s)
    mid.rho[s] = 0.5 * (r0[s] + r1[s]);
  return mid;
}

}  // namespace ptrans
