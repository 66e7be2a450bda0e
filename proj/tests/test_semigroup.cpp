#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ptrans/calculus.hpp"
#include "ptrans/parallel.hpp"
#include "ptrans/quadrature.hpp"
#include "ptrans/semigroup.hpp"

using namespace ptrans;

TEST_CASE("tanh-sinh quadrature on smooth and singular integrands") {
  // smooth: int_0^1 x^2 = 1/3
  auto sq = tanh_sinh([](double da, double) { return da * da; }, 0.0, 1.0);
  CHECK(sq.converged);
  CHECK(sq.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  // endpoint log singularity: int_0^1 log(x) = -1
  auto lg = tanh_sinh([](double da, double) { return std::log(da); }, 0.0, 1.0);
  CHECK(lg.converged);
  CHECK(lg.value == doctest::Approx(-1.0).epsilon(1e-12));
  // inverse square root at both ends: int_0^1 1/sqrt(x(1-x)) = pi
  auto isr = tanh_sinh(
      [](double da, double db) { return 1.0 / std::sqrt(da * db); }, 0.0, 1.0);
  CHECK(isr.converged);
  CHECK(isr.value == doctest::Approx(3.14159265358979324).epsilon(1e-12));
}

TEST_CASE("simpson rule is exact on cubics") {
  auto cubic = [](double x) { return x * x * x - 2.0 * x + 1.0; };
  CHECK(simpson(cubic, 0.0, 2.0, 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(simpson(cubic, 0.0, 1.0, 3), std::domain_error);
}

TEST_CASE("kernels at t = 0 are the identity") {
  const SiteSpace sites{{1.0, 0.5}, {6, 5}};
  for (auto method : {KernelMethod::MEHLER, KernelMethod::EXPM}) {
    const SemigroupOperator op = method == KernelMethod::MEHLER
                                     ? mehler_kernel(sites, 0.0)
                                     : expm_kernel(sites, 0.0);
    for (int x = 0; x < sites.dim(); ++x) {
      const int cap = sites.cap[static_cast<std::size_t>(x)];
      for (int n = 0; n <= cap; ++n)
        for (int k = 0; k <= cap; ++k)
          CHECK(op.entry(x, n, k, cap) ==
                doctest::Approx(n == k ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(mehler_kernel(sites, -0.1), std::domain_error);
  CHECK_THROWS_AS(expm_kernel(sites, -0.1), std::domain_error);
}

TEST_CASE("thinning kernel closed form from the empty state") {
  // starting empty, only the fresh Poisson contributes:
  // T(0,0) = exp(-(1 - e^{-t}) m)
  const SiteSpace sites{{1.0}, {12}};
  const double t = std::log(2.0);
  const SemigroupOperator op = mehler_kernel(sites, t);
  CHECK(op.entry(0, 0, 0, 12) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("rows are stochastic at all times") {
  const SiteSpace sites{{1.0, 2.5}, {16, 8}};
  for (double t : {0.1, 1.0, 10.0}) {
    CHECK(row_sum_residual(mehler_kernel(sites, t)) < 1e-12);
    CHECK(row_sum_residual(expm_kernel(sites, t)) < 1e-12);
  }
}

TEST_CASE("generator exponential is reversible and stationary") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {8, 8}});
  for (double t : {0.1, 1.0, 5.0}) {
    const SemigroupOperator op = expm_kernel(lat.sites(), t);
    CHECK(reversibility_residual(lat, op) < 1e-12);
    CHECK(stationarity_residual(lat, op) < 1e-12);
  }
}

TEST_CASE("long-time rows converge to the reference") {
  ConfigLattice lat(SiteSpace{{1.0}, {12}});
  const SemigroupOperator op = expm_kernel(lat.sites(), 50.0);
  const auto& p = lat.ref().site_pi[0];
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= 12; ++k)
      CHECK(std::fabs(op.entry(0, n, k, 12) -
                      p[static_cast<std::size_t>(k)]) < 1e-10);
}

TEST_CASE("the two constructions agree") {
  ConfigLattice lat(SiteSpace{{1.0}, {16}});
  REQUIRE(lat.max_tail_mass() < 1e-13);
  for (double t : {0.1, 1.0, 5.0}) {
    const double agree = kernel_agreement(lat, mehler_kernel(lat.sites(), t),
                                          expm_kernel(lat.sites(), t));
    CHECK(agree < std::max(1e-8, 10.0 * lat.max_tail_mass()));
  }
}

TEST_CASE("semigroup application: constants, bounds, semigroup law") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {8, 6}});
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Observable f(lat.states());
  for (double& v : f) v = u(eng);

  const SemigroupOperator op = expm_kernel(lat.sites(), 0.7);
  const Observable c1 = semigroup_apply(lat, op, Observable(lat.states(), 2.5));
  for (double v : c1) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));

  const Observable pf = semigroup_apply(lat, op, f);
  double lo = f[0], hi = f[0];
  for (double v : f) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : pf) {
    CHECK(v >= lo - 1e-12);
    CHECK(v <= hi + 1e-12);
  }

  const SemigroupOperator op_s = expm_kernel(lat.sites(), 0.4);
  const SemigroupOperator op_st = expm_kernel(lat.sites(), 1.1);
  const Observable two_step = semigroup_apply(lat, op_s, pf);
  const Observable one_step = semigroup_apply(lat, op_st, f);
  for (std::size_t s = 0; s < lat.states(); ++s)
    CHECK(two_step[s] == doctest::Approx(one_step[s]).epsilon(1e-10));
}

TEST_CASE("single-entry evaluation matches the kernel") {
  ConfigLattice lat(SiteSpace{{1.0}, {12}});
  const double t = std::log(2.0);
  const SemigroupOperator op = mehler_kernel(lat.sites(), t);
  Observable f(lat.states(), 0.0);
  f[0] = 1.0;
  const Observable pf = semigroup_apply(lat, op, f);
  CHECK(pf[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
}

TEST_CASE("dual action fixes the reference and preserves mass") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {8, 8}});
  const SemigroupOperator op = expm_kernel(lat.sites(), 0.9);
  const Density pi_after = dual_apply(lat, op, poisson_density(lat));
  for (double v : pi_after.rho) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const Density mu = exp_perturbed_density(lat, 5, 2.0);
  const Density after = dual_apply(lat, op, mu);
  CHECK(is_probability(lat, after));
}

TEST_CASE("intensity evolves by exponential interpolation") {
  ConfigLattice lat(SiteSpace{{1.0}, {16}});
  const Density mu = dirac_density(lat, {3});
  const auto i0 = intensity_measure(lat, mu);
  for (double t : {0.2, 1.0, 3.0}) {
    const Density mt = dual_apply(lat, expm_kernel(lat.sites(), t), mu);
    const auto it = intensity_measure(lat, mt);
    const double want =
        std::exp(-t) * i0[0] + (1.0 - std::exp(-t)) * lat.m(0);
    CHECK(std::fabs(it[0] - want) < 1e-10);
  }
}

TEST_CASE("relaxation to equilibrium in total variation") {
  ConfigLattice lat(SiteSpace{{1.0}, {12}});
  const Density far = dual_apply(lat, expm_kernel(lat.sites(), 50.0),
                                 dirac_density(lat, {0}));
  double tv = 0.0;
  for (std::size_t s = 0; s < lat.states(); ++s)
    tv += std::fabs(far.rho[s] - 1.0) * lat.pi(s);
  CHECK(tv < 1e-10);
}

TEST_CASE("entropy and fisher information decrease along the flow") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {6, 6}});
  for (std::uint64_t seed : {1, 2, 3}) {
    const Density mu = exp_perturbed_density(lat, seed, 2.0);
    double h_prev = entropy(lat, mu);
    double i_prev = fisher_information(lat, mu);
    for (double t : {0.1, 0.3, 0.8, 2.0}) {
      const Density mt = dual_apply(lat, expm_kernel(lat.sites(), t), mu);
      const double h = entropy(lat, mt);
      const double i = fisher_information(lat, mt);
      CHECK(h <= h_prev + 1e-12);
      CHECK(i <= i_prev + 1e-12);
      h_prev = h;
      i_prev = i;
    }
  }
}

TEST_CASE("entropy decays at least exponentially") {
  ConfigLattice lat(SiteSpace{{1.0}, {12}});
  for (std::uint64_t seed : {4, 5}) {
    const Density mu = exp_perturbed_density(lat, seed, 2.0);
    const double h0 = entropy(lat, mu);
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
      const Density mt = dual_apply(lat, expm_kernel(lat.sites(), t), mu);
      CHECK(entropy(lat, mt) <= std::exp(-t) * h0 + 1e-12);
    }
  }
}

TEST_CASE("commutation residual vanishes for constants and linear functionals") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {8, 8}});
  CHECK(be_commutation_residual(lat, Observable(lat.states(), 3.0), 1.0, 4) <
        1e-14);

  Observable lin(lat.states());
  for (std::size_t s = 0; s < lat.states(); ++s)
    lin[s] = 0.7 * lat.occ(s, 0) - 1.3 * lat.occ(s, 1);
  CHECK(be_commutation_residual(lat, lin, 1.0, 4) < 1e-10);
}

TEST_CASE("commutation residual is tiny for interior-supported functions") {
  ConfigLattice lat(SiteSpace{{1.0}, {16}});
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Observable f(lat.states(), 0.0);
  for (std::size_t s = 0; s < lat.states(); ++s)
    if (lat.occ(s, 0) <= 16 - 4) f[s] = u(eng);
  for (double t : {0.25, 1.0}) {
    CHECK(be_commutation_residual(lat, f, t, 4, KernelMethod::MEHLER) < 1e-8);
  }
  // the generator-exponential route pays the truncation price at the cap;
  // with a deeper margin it matches too
  Observable g(lat.states(), 0.0);
  for (std::size_t s = 0; s < lat.states(); ++s)
    if (lat.occ(s, 0) <= 16 - 8) g[s] = u(eng);
  CHECK(be_commutation_residual(lat, g, 0.25, 8, KernelMethod::EXPM) < 1e-9);
}
