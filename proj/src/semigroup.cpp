#include "ptrans/semigroup.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "ptrans/calculus.hpp"
#include "ptrans/parallel.hpp"

namespace ptrans {

namespace {

std::vector<double> mehler_site(double m, int cap, double t) {
  const int n1 = cap + 1;
  std::vector<double> ker(static_cast<std::size_t>(n1) * n1, 0.0);
  const double p = std::exp(-t);        // survival probability of a particle
  const double lam = (1.0 - p) * m;     // intensity of the fresh injection
  // Poisson(lam) pmf on 0..cap-1 by forward recurrence
  std::vector<double> pois(static_cast<std::size_t>(cap), 0.0);
  if (cap > 0) {
    pois[0] = std::exp(-lam);
    for (int i = 1; i < cap; ++i)
      pois[static_cast<std::size_t>(i)] =
          pois[static_cast<std::size_t>(i) - 1] * lam / i;
  }
  for (int n = 0; n <= cap; ++n) {
    // Binomial(n, p) pmf by forward recurrence
    std::vector<double> binom(static_cast<std::size_t>(n) + 1);
    binom[0] = std::pow(1.0 - p, n);
    for (int j = 1; j <= n; ++j)
      binom[static_cast<std::size_t>(j)] =
          binom[static_cast<std::size_t>(j) - 1] *
          (static_cast<double>(n - j + 1) / j) * (p / (1.0 - p));
    if (p == 1.0) {  // t = 0: the recurrence above divides by zero
      std::fill(binom.begin(), binom.end(), 0.0);
      binom[static_cast<std::size_t>(n)] = 1.0;
    } else if (n > 0 && binom[0] == 0.0) {
      // (1-p)^n underflowed (tiny t, large cap): fill in log space instead
      const double lp = std::log(p);
      const double lq = std::log1p(-p);
      for (int j = 0; j <= n; ++j)
        binom[static_cast<std::size_t>(j)] =
            std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                     std::lgamma(n - j + 1.0) + j * lp + (n - j) * lq);
    }
    double below = 0.0;
    for (int k = 0; k < cap; ++k) {
      double v = 0.0;
      for (int j = std::max(0, k - cap); j <= std::min(n, k); ++j)
        v += binom[static_cast<std::size_t>(j)] *
             pois[static_cast<std::size_t>(k - j)];
      ker[static_cast<std::size_t>(n) * n1 + static_cast<std::size_t>(k)] = v;
      below += v;
    }
    // everything at or above the cap is collected in the cap column
    ker[static_cast<std::size_t>(n) * n1 + static_cast<std::size_t>(cap)] =
        std::max(0.0, 1.0 - below);
  }
  return ker;
}

std::vector<double> expm_site(double m, int cap, double t,
                              const std::vector<double>& site_pi) {
  const int n1 = cap + 1;
  // pi-symmetrized generator: S = D^{1/2} Q D^{-1/2} is tridiagonal with
  // off-diagonal sqrt(m (n+1)) and diagonal -(m 1[n<cap] + n)
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n1, n1);
  for (int n = 0; n <= cap; ++n) {
    s(n, n) = -((n < cap ? m : 0.0) + n);
    if (n < cap) {
      const double off = std::sqrt(m * (n + 1));
      s(n, n + 1) = off;
      s(n + 1, n) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd ev = eig.eigenvalues();
  const Eigen::MatrixXd& u = eig.eigenvectors();
  Eigen::VectorXd scale(n1);
  for (int n = 0; n <= cap; ++n)
    scale(n) = std::sqrt(site_pi[static_cast<std::size_t>(n)]);
  Eigen::MatrixXd expd =
      u * (ev.array() * t).exp().matrix().asDiagonal() * u.transpose();
  std::vector<double> ker(static_cast<std::size_t>(n1) * n1);
  for (int n = 0; n <= cap; ++n) {
    // the de-symmetrizing scale ratio amplifies eigen round-off in far-tail
    // rows; renormalizing the row restores stochasticity and moves the
    // pi-weighted entries only below round-off
    double sum = 0.0;
    for (int k = 0; k <= cap; ++k) {
      const double v = expd(n, k) * scale(k) / scale(n);
      ker[static_cast<std::size_t>(n) * n1 + static_cast<std::size_t>(k)] = v;
      sum += v;
    }
    for (int k = 0; k <= cap; ++k)
      ker[static_cast<std::size_t>(n) * n1 + static_cast<std::size_t>(k)] /= sum;
  }
  return ker;
}

}  // namespace

SemigroupOperator mehler_kernel(const SiteSpace& sites, double t) {
  if (t < 0.0) throw std::domain_error("mehler_kernel: t must be >= 0");
  SemigroupOperator op;
  op.t = t;
  op.method = KernelMethod::MEHLER;
  op.site_kernels.resize(static_cast<std::size_t>(sites.dim()));
  for (int x = 0; x < sites.dim(); ++x)
    op.site_kernels[static_cast<std::size_t>(x)] =
        mehler_site(sites.m[static_cast<std::size_t>(x)],
                    sites.cap[static_cast<std::size_t>(x)], t);
  return op;
}

SemigroupOperator expm_kernel(const SiteSpace& sites, double t) {
  if (t < 0.0) throw std::domain_error("expm_kernel: t must be >= 0");
  SemigroupOperator op;
  op.t = t;
  op.method = KernelMethod::EXPM;
  op.site_kernels.resize(static_cast<std::size_t>(sites.dim()));
  for (int x = 0; x < sites.dim(); ++x) {
    // per-site truncated Poisson weights, forward recurrence + normalize
    const double m = sites.m[static_cast<std::size_t>(x)];
    const int cap = sites.cap[static_cast<std::size_t>(x)];
    std::vector<double> pmf(static_cast<std::size_t>(cap) + 1);
    pmf[0] = 1.0;
    double z = 1.0;
    for (int n = 0; n < cap; ++n) {
      pmf[static_cast<std::size_t>(n) + 1] =
          pmf[static_cast<std::size_t>(n)] * m / (n + 1);
      z += pmf[static_cast<std::size_t>(n) + 1];
    }
    for (double& v : pmf) v /= z;
    op.site_kernels[static_cast<std::size_t>(x)] = expm_site(m, cap, t, pmf);
  }
  return op;
}

Observable semigroup_apply(const ConfigLattice& lat,
                           const SemigroupOperator& op, const Observable& f) {
  if (f.size() != lat.states())
    throw std::invalid_argument("semigroup_apply: observable size mismatch");
  if (op.site_kernels.size() != static_cast<std::size_t>(lat.dim()))
    throw std::invalid_argument("semigroup_apply: operator dimension mismatch");
  Observable cur = f;
  Observable next(lat.states());
  for (int x = 0; x < lat.dim(); ++x) {
    const int cap = lat.cap(x);
    const std::size_t stride = lat.stride(x);
    const auto& ker = op.site_kernels[static_cast<std::size_t>(x)];
    parallel_for(lat.states(), [&](std::size_t s) {
      const int n = lat.occ(s, x);
      const std::size_t base = s - static_cast<std::size_t>(n) * stride;
      const double* row =
          ker.data() + static_cast<std::size_t>(n) * (static_cast<std::size_t>(cap) + 1);
      double v = 0.0;
      for (int k = 0; k <= cap; ++k)
        v += row[k] * cur[base + static_cast<std::size_t>(k) * stride];
      next[s] = v;
    });
    std::swap(cur, next);
  }
  return cur;
}

Density dual_apply(const ConfigLattice& lat, const SemigroupOperator& op,
                   const Density& mu) {
  Density out{semigroup_apply(lat, op, mu.rho)};
  for (double& v : out.rho)
    if (v < 0.0) v = 0.0;
  normalize(lat, out);
  return out;
}

double row_sum_residual(const SemigroupOperator& op) {
  double worst = 0.0;
  for (const auto& ker : op.site_kernels) {
    const auto n1 = static_cast<std::size_t>(std::lround(std::sqrt(
        static_cast<double>(ker.size()))));
    for (std::size_t n = 0; n < n1; ++n) {
      double s = 0.0;
      for (std::size_t k = 0; k < n1; ++k) s += ker[n * n1 + k];
      worst = std::max(worst, std::fabs(s - 1.0));
    }
  }
  return worst;
}

double reversibility_residual(const ConfigLattice& lat,
                              const SemigroupOperator& op) {
  double worst = 0.0;
  for (int x = 0; x < lat.dim(); ++x) {
    const auto& p = lat.ref().site_pi[static_cast<std::size_t>(x)];
    const int cap = lat.cap(x);
    for (int n = 0; n <= cap; ++n)
      for (int k = n + 1; k <= cap; ++k)
        worst = std::max(
            worst,
            std::fabs(p[static_cast<std::size_t>(n)] * op.entry(x, n, k, cap) -
                      p[static_cast<std::size_t>(k)] * op.entry(x, k, n, cap)));
  }
  return worst;
}

double stationarity_residual(const ConfigLattice& lat,
                             const SemigroupOperator& op) {
  double worst = 0.0;
  for (int x = 0; x < lat.dim(); ++x) {
    const auto& p = lat.ref().site_pi[static_cast<std::size_t>(x)];
    const int cap = lat.cap(x);
    for (int k = 0; k <= cap; ++k) {
      double v = 0.0;
      for (int n = 0; n <= cap; ++n)
        v += p[static_cast<std::size_t>(n)] * op.entry(x, n, k, cap);
      worst = std::max(worst, std::fabs(v - p[static_cast<std::size_t>(k)]));
    }
  }
  return worst;
}

double kernel_agreement(const ConfigLattice& lat, const SemigroupOperator& a,
                        const SemigroupOperator& b) {
  double worst = 0.0;
  for (int x = 0; x < lat.dim(); ++x) {
    const auto& p = lat.ref().site_pi[static_cast<std::size_t>(x)];
    const int cap = lat.cap(x);
    for (int n = 0; n <= cap; ++n)
      for (int k = 0; k <= cap; ++k)
        worst = std::max(worst,
                         p[static_cast<std::size_t>(n)] *
                             std::fabs(a.entry(x, n, k, cap) -
                                       b.entry(x, n, k, cap)));
  }
  return worst;
}

double be_commutation_residual(const ConfigLattice& lat, const Observable& f,
                               double t, int margin, KernelMethod method) {
  const SemigroupOperator op = method == KernelMethod::MEHLER
                                   ? mehler_kernel(lat.sites(), t)
                                   : expm_kernel(lat.sites(), t);
  const Observable ptf = semigroup_apply(lat, op, f);
  const EdgeField lhs = difference(lat, ptf);
  const EdgeField df = difference(lat, f);
  const double decay = std::exp(-t);

  double worst = 0.0;
  for (int x = 0; x < lat.dim(); ++x) {
    // evolve the slot slice u(. , x) as an observable
    Observable slice(lat.states());
    for (std::size_t s = 0; s < lat.states(); ++s)
      slice[s] = df[lat.slot(x, s)];
    const Observable pt_slice = semigroup_apply(lat, op, slice);
    for (std::size_t s = 0; s < lat.states(); ++s) {
      if (!lat.open(s, x)) continue;
      // the edge head must stay `margin` levels below every cap
      bool interior = lat.occ(s, x) + 1 <= lat.cap(x) - margin;
      for (int y = 0; y < lat.dim() && interior; ++y)
        if (lat.occ(s, y) > lat.cap(y) - margin) interior = false;
      if (!interior) continue;
      worst = std::max(
          worst, std::fabs(lhs[lat.slot(x, s)] - decay * pt_slice[s]));
    }
  }
  return worst;
}

}  // namespace ptrans
