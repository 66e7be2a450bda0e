#include "ptrans/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ptrans/calculus.hpp"
#include "ptrans/parallel.hpp"
#include "ptrans/semigroup.hpp"

namespace ptrans {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Discretized action minimization on [0, 1] with K intervals. The variable
// vector is [rho_1 .. rho_{K-1} | w_0 .. w_{K-1}]: interior knot densities
// (projected to >= 0) followed by per-interval velocity tables (closed
// slots never move). Endpoints are pinned. Mass balance per interval k and
// state eta, in density units:
//   c_k(eta) = rho_{k+1}(eta) - rho_k(eta)
//              - dt (sum_x eta_x w_k(x, eta - delta_x)
//                    - sum_x m_x w_k(x, eta) [eta_x < N_x]),
// which equals div(w pi m)/pi by detailed balance.
class Problem {
 public:
  Problem(const ConfigLattice& lat, const Density& mu0, const Density& mu1,
          int K, double eps_fisher)
      : lat_(lat),
        rho0_(mu0.rho),
        rho1_(mu1.rho),
        K_(K),
        dt_(1.0 / K),
        eps_(eps_fisher),
        S_(lat.states()),
        E_(lat.slots()) {}

  std::size_t n_rho() const { return static_cast<std::size_t>(K_ - 1) * S_; }
  std::size_t n_w() const { return static_cast<std::size_t>(K_) * E_; }
  std::size_t dim() const { return n_rho() + n_w(); }
  int K() const { return K_; }
  double dt() const { return dt_; }

  const double* knot(const std::vector<double>& z, int k) const {
    if (k == 0) return rho0_.data();
    if (k == K_) return rho1_.data();
    return z.data() + static_cast<std::size_t>(k - 1) * S_;
  }
  double* knot_mut(std::vector<double>& z, int k) const {
    return z.data() + static_cast<std::size_t>(k - 1) * S_;
  }
  const double* w(const std::vector<double>& z, int k) const {
    return z.data() + n_rho() + static_cast<std::size_t>(k) * E_;
  }
  double* w_mut(std::vector<double>& z, int k) const {
    return z.data() + n_rho() + static_cast<std::size_t>(k) * E_;
  }

  // c has K*S entries, density units
  void constraints(const std::vector<double>& z, std::vector<double>& c) const {
    c.assign(static_cast<std::size_t>(K_) * S_, 0.0);
    for (int k = 0; k < K_; ++k) {
      const double* ra = knot(z, k);
      const double* rb = knot(z, k + 1);
      const double* wk = w(z, k);
      double* ck = c.data() + static_cast<std::size_t>(k) * S_;
      parallel_for(S_, [&](std::size_t s) {
        ck[s] = rb[s] - ra[s] - dt_ * rho_div(wk, s);
      });
    }
  }

  // Smoothed objective
  //   sum_k dt sum_open slots w^2 pi m / max(theta(rbar, rbar_up), floor)
  // plus, when eps > 0, the Fisher term
  //   eps sum_k dt sum_open slots (rb_up - rb)(log rb_up - log rb) pi m,
  // worth +inf when exactly one side of a slot vanishes. With grad !=
  // nullptr the objective derivatives are ADDED into it.
  double objective(const std::vector<double>& z, double floor,
                   std::vector<double>* grad) const {
    double total = 0.0;
    std::vector<double> rbar(S_), fpart(E_), thf_c(E_, 1.0), cds(E_), cdt(E_),
        gmid(S_);
    for (int k = 0; k < K_; ++k) {
      const double* ra = knot(z, k);
      const double* rb = knot(z, k + 1);
      const double* wk = w(z, k);
      parallel_for(S_, [&](std::size_t s) { rbar[s] = 0.5 * (ra[s] + rb[s]); });
      const bool want = grad != nullptr;
      parallel_for(E_, [&](std::size_t e) {
        const int x = static_cast<int>(e / S_);
        const std::size_t s = e % S_;
        fpart[e] = cds[e] = cdt[e] = 0.0;
        thf_c[e] = 1.0;
        if (!lat_.open(s, x)) return;
        const std::size_t up = lat_.up(s, x);
        const double sv = rbar[s], tv = rbar[up];
        const double pm = lat_.pim(x, s);
        const double th = log_mean(sv, tv);
        const double thf = std::max(th, floor);
        const double wv = wk[e];
        thf_c[e] = thf;
        fpart[e] = dt_ * wv * wv * pm / thf;
        if (want && th > floor) {
          double ds, dtv;
          log_mean_partials(sv, tv, ds, dtv);
          const double coef = -dt_ * wv * wv * pm / (thf * thf);
          cds[e] = coef * ds;
          cdt[e] = coef * dtv;
        }
        if (eps_ > 0.0) {
          if (sv > 0.0 && tv > 0.0) {
            const double lr = std::log(tv / sv);
            fpart[e] += eps_ * dt_ * (tv - sv) * lr * pm;
            if (want) {
              const double r = tv / sv;
              cds[e] += eps_ * dt_ * pm * (-(lr + r - 1.0));
              cdt[e] += eps_ * dt_ * pm * (lr + 1.0 - 1.0 / r);
            }
          } else if (sv > 0.0 || tv > 0.0) {
            fpart[e] = kInf;
          }
        }
      });
      const double part = det_sum(fpart);
      if (!std::isfinite(part)) return kInf;
      total += part;
      if (grad) {
        double* gw = grad->data() + n_rho() + static_cast<std::size_t>(k) * E_;
        parallel_for(E_, [&](std::size_t e) {
          const int x = static_cast<int>(e / S_);
          const std::size_t s = e % S_;
          if (!lat_.open(s, x)) return;
          gw[e] += 2.0 * dt_ * wk[e] * lat_.pim(x, s) / thf_c[e];
        });
        parallel_for(S_, [&](std::size_t s) {
          double acc = 0.0;
          for (int x = 0; x < lat_.dim(); ++x) {
            if (lat_.open(s, x)) acc += cds[lat_.slot(x, s)];
            if (lat_.occ(s, x) > 0) acc += cdt[lat_.slot(x, lat_.down(s, x))];
          }
          gmid[s] = acc;
        });
        if (k > 0) {
          double* g = grad->data() + static_cast<std::size_t>(k - 1) * S_;
          for (std::size_t s = 0; s < S_; ++s) g[s] += 0.5 * gmid[s];
        }
        if (k + 1 < K_) {
          double* g = grad->data() + static_cast<std::size_t>(k) * S_;
          for (std::size_t s = 0; s < S_; ++s) g[s] += 0.5 * gmid[s];
        }
      }
    }
    return total;
  }

  // f + <y, c> + (mu/2)|c|^2 and its gradient; cmax gets max |c|.
  double aug_lagrangian(const std::vector<double>& z,
                        const std::vector<double>& y, double mu, double floor,
                        std::vector<double>* grad, double* cmax) const {
    if (grad) grad->assign(dim(), 0.0);
    double f = objective(z, floor, grad);
    std::vector<double> c, lam(S_);
    constraints(z, c);
    if (cmax) *cmax = max_abs(c);
    for (int k = 0; k < K_; ++k) {
      const double* ck = c.data() + static_cast<std::size_t>(k) * S_;
      const double* yk = y.data() + static_cast<std::size_t>(k) * S_;
      if (std::isfinite(f))
        f += det_sum_n(S_, [&](std::size_t s) {
          return yk[s] * ck[s] + 0.5 * mu * ck[s] * ck[s];
        });
      if (!grad) continue;
      parallel_for(S_, [&](std::size_t s) { lam[s] = yk[s] + mu * ck[s]; });
      if (k + 1 < K_) {
        double* g = grad->data() + static_cast<std::size_t>(k) * S_;
        for (std::size_t s = 0; s < S_; ++s) g[s] += lam[s];
      }
      if (k > 0) {
        double* g = grad->data() + static_cast<std::size_t>(k - 1) * S_;
        for (std::size_t s = 0; s < S_; ++s) g[s] -= lam[s];
      }
      double* gw = grad->data() + n_rho() + static_cast<std::size_t>(k) * E_;
      parallel_for(E_, [&](std::size_t e) {
        const int x = static_cast<int>(e / S_);
        const std::size_t s = e % S_;
        if (!lat_.open(s, x)) return;
        gw[e] -= dt_ * ((lat_.occ(s, x) + 1) * lam[lat_.up(s, x)] -
                        lat_.m(x) * lam[s]);
      });
    }
    return f;
  }

  // Min-norm velocity with prescribed divergence b (density units):
  // w = A^T u with (A A^T) u = b by conjugate gradients. The null space of
  // A^T is spanned by pi, and b _|_ pi whenever the endpoint masses agree.
  std::vector<double> least_squares_w(const std::vector<double>& b) const {
    std::vector<double> u(S_, 0.0), r = b, p, Ap(S_), tmp(E_);
    const double bn = std::sqrt(det_dot(b, b));
    if (bn == 0.0) return std::vector<double>(E_, 0.0);
    p = r;
    double rr = det_dot(r, r);
    const std::size_t maxit = 40 * S_ + 200;
    for (std::size_t it = 0; it < maxit && std::sqrt(rr) > 1e-13 * bn; ++it) {
      apply_div_transpose(p, tmp);
      parallel_for(S_, [&](std::size_t s) { Ap[s] = rho_div(tmp.data(), s); });
      const double pAp = det_dot(p, Ap);
      if (pAp <= 0.0) break;
      const double alpha = rr / pAp;
      parallel_for(S_, [&](std::size_t s) {
        u[s] += alpha * p[s];
        r[s] -= alpha * Ap[s];
      });
      const double rr2 = det_dot(r, r);
      parallel_for(S_, [&](std::size_t s) { p[s] = r[s] + (rr2 / rr) * p[s]; });
      rr = rr2;
    }
    apply_div_transpose(u, tmp);
    return tmp;
  }

  // div(w pi m)/pi at state s
  double rho_div(const double* wk, std::size_t s) const {
    double div = 0.0;
    for (int x = 0; x < lat_.dim(); ++x) {
      const int n = lat_.occ(s, x);
      if (n > 0) div += n * wk[lat_.slot(x, lat_.down(s, x))];
      if (n < lat_.cap(x)) div -= lat_.m(x) * wk[lat_.slot(x, s)];
    }
    return div;
  }

 private:
  void apply_div_transpose(const std::vector<double>& u,
                           std::vector<double>& out) const {
    out.assign(E_, 0.0);
    parallel_for(E_, [&](std::size_t e) {
      const int x = static_cast<int>(e / S_);
      const std::size_t s = e % S_;
      if (!lat_.open(s, x)) return;
      out[e] = (lat_.occ(s, x) + 1) * u[lat_.up(s, x)] - lat_.m(x) * u[s];
    });
  }

  const ConfigLattice& lat_;
  std::vector<double> rho0_, rho1_;
  int K_;
  double dt_;
  double eps_;
  std::size_t S_, E_;
};

struct InnerExit {
  double f = 0.0;
  double pg_norm = kInf;
  long iters = 0;
};

// Projected limited-memory quasi-Newton descent on the augmented
// Lagrangian: interior-knot coordinates are clamped at zero, velocities are
// free. Stops on the projected-gradient norm, the step budget, or when
// progress dies.
InnerExit minimize_al(const Problem& P, std::vector<double>& z,
                      const std::vector<double>& y, double mu, double floor,
                      double gtol, int max_iters, int memory) {
  const std::size_t n = P.dim();
  const std::size_t nR = P.n_rho();
  std::vector<double> g(n), gnew(n), d(n), znew(n), pg(n);
  std::vector<std::vector<double>> Sh, Yh;
  std::vector<double> rho_h, alpha_h;
  double gamma = 1.0;

  auto fill_pg = [&]() {
    for (std::size_t i = 0; i < n; ++i)
      pg[i] = i < nR ? z[i] - std::max(0.0, z[i] - g[i]) : g[i];
  };

  double f = P.aug_lagrangian(z, y, mu, floor, &g, nullptr);
  InnerExit exit;
  int stall = 0;
  for (long it = 0; it < max_iters; ++it) {
    fill_pg();
    exit.f = f;
    exit.pg_norm = max_abs(pg);
    exit.iters = it;
    if (exit.pg_norm <= gtol) return exit;

    auto frozen = [&](std::size_t i) {
      return i < nR && z[i] == 0.0 && g[i] > 0.0;
    };
    for (std::size_t i = 0; i < n; ++i) d[i] = frozen(i) ? 0.0 : -g[i];
    const std::size_t h = Sh.size();
    alpha_h.assign(h, 0.0);
    for (std::size_t j = h; j-- > 0;) {
      alpha_h[j] = rho_h[j] * det_dot(Sh[j], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha_h[j] * Yh[j][i];
    }
    for (std::size_t i = 0; i < n; ++i) d[i] *= gamma;
    for (std::size_t j = 0; j < h; ++j) {
      const double beta = rho_h[j] * det_dot(Yh[j], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += Sh[j][i] * (alpha_h[j] - beta);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (frozen(i)) d[i] = 0.0;
    if (det_dot(g, d) >= 0.0) {
      Sh.clear();
      Yh.clear();
      rho_h.clear();
      gamma = 1.0;
      for (std::size_t i = 0; i < n; ++i) d[i] = frozen(i) ? 0.0 : -g[i];
    }

    // backtracking with projection; sufficient decrease is measured on the
    // projected displacement
    double alpha =
        it == 0 ? std::min(1.0, 1.0 / std::max(1e-12, max_abs(g))) : 1.0;
    bool accepted = false;
    double fnew = f;
    for (int ls = 0; ls < 80; ++ls) {
      for (std::size_t i = 0; i < n; ++i) {
        const double v = z[i] + alpha * d[i];
        znew[i] = i < nR ? std::max(0.0, v) : v;
      }
      double gstep = 0.0;
      for (std::size_t i = 0; i < n; ++i) gstep += g[i] * (znew[i] - z[i]);
      fnew = P.aug_lagrangian(znew, y, mu, floor, nullptr, nullptr);
      if (std::isfinite(fnew) && gstep <= 0.0 && fnew <= f + 1e-4 * gstep) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
      if (alpha < 1e-20) break;
    }
    if (!accepted) return exit;  // stalled at the current iterate

    fnew = P.aug_lagrangian(znew, y, mu, floor, &gnew, nullptr);
    std::vector<double> sv(n), yv(n);
    for (std::size_t i = 0; i < n; ++i) {
      sv[i] = znew[i] - z[i];
      yv[i] = gnew[i] - g[i];
    }
    const double sy = det_dot(sv, yv);
    const double ss = det_dot(sv, sv);
    const double yy = det_dot(yv, yv);
    if (yy > 0.0 && sy > 1e-10 * std::sqrt(ss * yy)) {
      Sh.push_back(std::move(sv));
      Yh.push_back(std::move(yv));
      rho_h.push_back(1.0 / sy);
      gamma = sy / yy;
      if (static_cast<int>(Sh.size()) > memory) {
        Sh.erase(Sh.begin());
        Yh.erase(Yh.begin());
        rho_h.erase(rho_h.begin());
      }
    }
    const double drop = f - fnew;
    z.swap(znew);
    g.swap(gnew);
    f = fnew;
    if (drop <= 1e-16 * std::max(1.0, std::fabs(f))) {
      if (++stall >= 10) break;
    } else {
      stall = 0;
    }
  }
  exit.f = f;
  exit.iters = std::min<long>(exit.iters + 1, max_iters);
  fill_pg();
  exit.pg_norm = max_abs(pg);
  return exit;
}

void init_linear(const Problem& P, const ConfigLattice& lat,
                 const Density& mu0, const Density& mu1,
                 std::vector<double>& z) {
  const int K = P.K();
  const std::size_t S = lat.states();
  for (int k = 1; k < K; ++k) {
    const double a = static_cast<double>(k) / K;
    double* r = P.knot_mut(z, k);
    for (std::size_t s = 0; s < S; ++s)
      r[s] = (1.0 - a) * mu0.rho[s] + a * mu1.rho[s];
  }
  // every interval has the same divergence (rho1 - rho0)/(K dt): one shared
  // min-norm velocity
  std::vector<double> b(S);
  for (std::size_t s = 0; s < S; ++s)
    b[s] = (mu1.rho[s] - mu0.rho[s]) / (K * P.dt());
  const std::vector<double> w0 = P.least_squares_w(b);
  for (int k = 0; k < K; ++k)
    std::memcpy(P.w_mut(z, k), w0.data(), sizeof(double) * w0.size());
}

void init_ou_bridge(const Problem& P, const ConfigLattice& lat,
                    const Density& mu0, const Density& mu1,
                    std::vector<double>& z) {
  const int K = P.K();
  if (K % 2 != 0)
    throw std::invalid_argument("solver: bridge initialization needs even K");
  const int Kh = K / 2;
  const CEPath fa = ou_path(lat, mu0, 0.5, Kh);
  const CEPath fb = ou_path(lat, mu1, 0.5, Kh);
  const std::size_t S = lat.states(), E = lat.slots();
  for (int k = 1; k < K; ++k) {
    double* r = P.knot_mut(z, k);
    if (k < Kh) {
      std::memcpy(r, fa.densities[static_cast<std::size_t>(k)].rho.data(),
                  sizeof(double) * S);
    } else if (k > Kh) {
      std::memcpy(r, fb.densities[static_cast<std::size_t>(K - k)].rho.data(),
                  sizeof(double) * S);
    } else {
      for (std::size_t s = 0; s < S; ++s)
        r[s] = 0.5 * (fa.densities[static_cast<std::size_t>(Kh)].rho[s] +
                      fb.densities[static_cast<std::size_t>(Kh)].rho[s]);
    }
  }
  for (int k = 0; k < K; ++k) {
    double* wk = P.w_mut(z, k);
    const EdgeField src =
        k < Kh
            ? w_from_flux(lat, fa.fluxes[static_cast<std::size_t>(k)])
            : w_from_flux(lat, fb.fluxes[static_cast<std::size_t>(K - 1 - k)]);
    const double sign = k < Kh ? 1.0 : -1.0;
    for (std::size_t e = 0; e < E; ++e) wk[e] = sign * src[e];
  }
}

SolveResult solve_common(const ConfigLattice& lat, const Density& mu0,
                         const Density& mu1, double eps,
                         const SolverConfig& cfg) {
  if (mu0.rho.size() != lat.states() || mu1.rho.size() != lat.states())
    throw std::invalid_argument("solver: densities do not match the lattice");
  if (cfg.K < 1) throw std::invalid_argument("solver: need K >= 1");
  if (!(cfg.kkt_tol > 0.0)) throw std::invalid_argument("solver: kkt_tol <= 0");
  const auto t0 = std::chrono::steady_clock::now();

  Problem P(lat, mu0, mu1, cfg.K, eps);
  std::vector<double> z(P.dim(), 0.0);
  if (cfg.init == InitMode::LINEAR)
    init_linear(P, lat, mu0, mu1, z);
  else
    init_ou_bridge(P, lat, mu0, mu1, z);

  // the Fisher barrier needs strictly positive interior knots: blend the
  // reference in when the start sits on the boundary of the support
  if (eps > 0.0 && cfg.K > 1 &&
      !std::isfinite(P.objective(z, cfg.theta_floor_init, nullptr))) {
    const Density ref = poisson_density(lat);
    for (int k = 1; k < cfg.K; ++k) {
      double* r = P.knot_mut(z, k);
      for (std::size_t s = 0; s < lat.states(); ++s)
        r[s] = 0.999 * r[s] + 0.001 * ref.rho[s];
    }
  }

  std::vector<double> y(static_cast<std::size_t>(cfg.K) * lat.states(), 0.0);
  std::vector<double> c;
  double mu = 10.0;
  double eta = 1e-2;
  double floor = cfg.theta_floor_init;
  SolverReport rep;
  double cn = kInf;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    const InnerExit inner = minimize_al(P, z, y, mu, floor, cfg.kkt_tol * 0.1,
                                        cfg.max_inner, cfg.memory);
    rep.inner_iterations += inner.iters;
    rep.stationarity = inner.pg_norm;
    rep.outer_iterations = outer + 1;
    P.constraints(z, c);
    cn = max_abs(c);
    const bool floor_done = floor <= cfg.theta_floor_final * (1.0 + 1e-12);
    if (cn <= std::max(cfg.ce_tol, eta)) {
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += mu * c[i];
      if (cn <= cfg.ce_tol && floor_done) {
        rep.converged = true;
        break;
      }
      eta = std::max(cfg.ce_tol * 0.5, eta / std::pow(mu, 0.9));
    } else {
      mu = std::min(mu * 10.0, 1e12);
      eta = std::max(cfg.ce_tol * 0.5, std::pow(mu, -0.1));
    }
    floor = std::max(cfg.theta_floor_final, floor * cfg.theta_floor_decay);
  }

  // assemble the path; velocities over empty regions are dust left by the
  // smoothing floor and carry no mass, so they are dropped before pricing
  SolveResult out;
  out.path.times.resize(static_cast<std::size_t>(cfg.K) + 1);
  for (int k = 0; k <= cfg.K; ++k)
    out.path.times[static_cast<std::size_t>(k)] =
        static_cast<double>(k) / cfg.K;
  out.path.densities.resize(static_cast<std::size_t>(cfg.K) + 1);
  for (int k = 0; k <= cfg.K; ++k) {
    const double* r = P.knot(z, k);
    out.path.densities[static_cast<std::size_t>(k)].rho.assign(
        r, r + lat.states());
  }
  out.path.fluxes.assign(static_cast<std::size_t>(cfg.K),
                         FluxMeasure{EdgeField(lat.slots(), 0.0)});
  for (int k = 0; k < cfg.K; ++k) {
    const double* wk = P.w(z, k);
    const Density mid = midpoint_density(out.path, k);
    auto& atoms = out.path.fluxes[static_cast<std::size_t>(k)].atoms;
    for (int x = 0; x < lat.dim(); ++x)
      for (std::size_t s = 0; s < lat.states(); ++s) {
        if (!lat.open(s, x)) continue;
        if (log_mean(mid.rho[s], mid.rho[lat.up(s, x)]) == 0.0) continue;
        atoms[lat.slot(x, s)] = wk[lat.slot(x, s)] * lat.pim(x, s);
      }
  }
  // feasibility of the path as returned, in density units
  double feas = 0.0;
  for (int k = 0; k < cfg.K; ++k) {
    const Observable div =
        flux_divergence(lat, out.path.fluxes[static_cast<std::size_t>(k)]);
    const auto& ra = out.path.densities[static_cast<std::size_t>(k)].rho;
    const auto& rb = out.path.densities[static_cast<std::size_t>(k) + 1].rho;
    for (std::size_t s = 0; s < lat.states(); ++s)
      feas = std::max(feas, std::fabs(rb[s] - ra[s] -
                                      P.dt() * div[s] / lat.pi(s)));
  }
  rep.feasibility = feas;
  rep.kkt_residual = rep.stationarity + rep.feasibility;
  rep.converged = rep.converged && feas <= cfg.ce_tol * 1.01;

  out.value =
      eps > 0.0 ? action_entropic(lat, out.path, eps) : action(lat, out.path);
  rep.objective = out.value;
  rep.objective_smoothed = P.objective(z, cfg.theta_floor_final, nullptr);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.report = std::move(rep);
  return out;
}

}  // namespace

SolveResult solve_distance(const ConfigLattice& lat, const Density& mu0,
                           const Density& mu1, const SolverConfig& cfg) {
  return solve_common(lat, mu0, mu1, 0.0, cfg);
}

SolveResult solve_entropic(const ConfigLattice& lat, const Density& mu0,
                           const Density& mu1, double eps,
                           const SolverConfig& cfg) {
  if (eps < 0.0) throw std::domain_error("solver: eps must be >= 0");
  return solve_common(lat, mu0, mu1, eps, cfg);
}

SolverReport refine(const ConfigLattice& lat, const Density& mu0,
                    const Density& mu1, const std::vector<int>& ladder,
                    const SolverConfig& cfg) {
  if (ladder.size() < 2)
    throw std::invalid_argument("refine: need at least two K values");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1])
      throw std::invalid_argument("refine: K values must increase");
  SolverReport rep;
  rep.converged = true;
  for (int K : ladder) {
    SolverConfig c = cfg;
    c.K = K;
    const SolveResult r = solve_distance(lat, mu0, mu1, c);
    rep.refinement.push_back({K, r.value});
    rep.objective = r.value;
    rep.objective_smoothed = r.report.objective_smoothed;
    rep.feasibility = std::max(rep.feasibility, r.report.feasibility);
    rep.stationarity = std::max(rep.stationarity, r.report.stationarity);
    rep.inner_iterations += r.report.inner_iterations;
    rep.outer_iterations += r.report.outer_iterations;
    rep.converged = rep.converged && r.report.converged;
    rep.wall_seconds += r.report.wall_seconds;
  }
  rep.kkt_residual = rep.stationarity + rep.feasibility;

  const std::size_t n = rep.refinement.size();
  const double d1 = rep.refinement[n - 1].value - rep.refinement[n - 2].value;
  const double d0 = n >= 3
                        ? rep.refinement[n - 2].value - rep.refinement[n - 3].value
                        : 2.0 * d1;  // two rows: assume first order
  rep.monotone = true;
  for (std::size_t i = 2; i < n; ++i) {
    const double a = rep.refinement[i - 1].value - rep.refinement[i - 2].value;
    const double b = rep.refinement[i].value - rep.refinement[i - 1].value;
    if (a * b < 0.0 || std::fabs(b) > std::fabs(a)) rep.monotone = false;
  }
  if (std::fabs(d1) < 1e-14) {
    rep.order = 0.0;
    rep.extrapolated = rep.refinement[n - 1].value;
    rep.error_estimate = std::fabs(d1);
  } else if (!rep.monotone) {
    rep.extrapolated = rep.refinement[n - 1].value;
    double worst = 0.0;
    for (std::size_t i = 1; i < n; ++i)
      worst = std::max(worst, std::fabs(rep.refinement[i].value -
                                        rep.refinement[i - 1].value));
    rep.error_estimate = worst;
  } else {
    rep.order = std::log2(std::fabs(d0 / d1));
    rep.extrapolated =
        rep.refinement[n - 1].value + d1 / (std::pow(2.0, rep.order) - 1.0);
    rep.error_estimate =
        std::fabs(rep.extrapolated - rep.refinement[n - 1].value);
  }
  return rep;
}

}  // namespace ptrans
