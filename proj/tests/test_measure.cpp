#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ptrans/measure.hpp"
#include "ptrans/parallel.hpp"

using namespace ptrans;

namespace {

EdgeField random_edge_field(const ConfigLattice& lat, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  EdgeField v(lat.slots(), 0.0);
  for (int x = 0; x < lat.dim(); ++x)
    for (std::size_t s = 0; s < lat.states(); ++s)
      if (lat.open(s, x)) v[lat.slot(x, s)] = u(eng);
  return v;
}

}  // namespace

TEST_CASE("density constructors produce probabilities") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {6, 6}});
  CHECK(is_probability(lat, poisson_density(lat)));
  CHECK(is_probability(lat, dirac_density(lat, {0, 0})));
  CHECK(is_probability(lat, dirac_density(lat, {6, 2})));
  const Density r = exp_perturbed_density(lat, 42, 2.0);
  CHECK(is_probability(lat, r));
  for (double v : r.rho) CHECK(v > 0.0);
}

TEST_CASE("seeded densities are reproducible") {
  ConfigLattice lat(SiteSpace{{1.0}, {8}});
  const Density a = exp_perturbed_density(lat, 7, 0.5);
  const Density b = exp_perturbed_density(lat, 7, 0.5);
  const Density c = exp_perturbed_density(lat, 8, 0.5);
  CHECK(a.rho == b.rho);
  CHECK(a.rho != c.rho);
}

TEST_CASE("intensity of the reference and of point masses") {
  ConfigLattice lat(SiteSpace{{1.0}, {16}});
  const auto i_pi = intensity_measure(lat, poisson_density(lat));
  double expect = 0.0;
  for (int n = 0; n <= 16; ++n) expect += n * lat.ref().site_pi[0][n];
  CHECK(std::fabs(i_pi[0] - expect) < 1e-12);

  CHECK(intensity_measure(lat, dirac_density(lat, {0}))[0] == 0.0);
  CHECK(intensity_measure(lat, dirac_density(lat, {2}))[0] ==
        doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("campbell measure of the reference is pi times m") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {6, 6}});
  const FluxMeasure c = campbell_measure(lat, poisson_density(lat));
  double worst = 0.0;
  for (int x = 0; x < lat.dim(); ++x)
    for (std::size_t s = 0; s < lat.states(); ++s) {
      const double want = lat.open(s, x) ? lat.pim(x, s) : 0.0;
      worst = std::max(worst, std::fabs(c.atoms[lat.slot(x, s)] - want));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("campbell marginals reproduce the intensity") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {6, 6}});
  const Density mu = exp_perturbed_density(lat, 3, 2.0);
  const FluxMeasure c = campbell_measure(lat, mu);
  const auto intens = intensity_measure(lat, mu);
  for (int x = 0; x < lat.dim(); ++x) {
    const double* a = c.atoms.data() + lat.slot(x, 0);
    const double total = det_sum(a, lat.states());
    CHECK(std::fabs(total - intens[static_cast<std::size_t>(x)]) < 1e-12);
  }
}

TEST_CASE("campbell measure of point masses") {
  ConfigLattice lat(SiteSpace{{1.0}, {4}});
  const FluxMeasure empty = campbell_measure(lat, dirac_density(lat, {0}));
  CHECK(max_abs(empty.atoms) == 0.0);

  const FluxMeasure one = campbell_measure(lat, dirac_density(lat, {1}));
  CHECK(one.atoms[lat.slot(0, 0)] == doctest::Approx(1.0).epsilon(1e-13));
  double rest = 0.0;
  for (std::size_t s = 1; s < lat.states(); ++s)
    rest += std::fabs(one.atoms[lat.slot(0, s)]);
  CHECK(rest == 0.0);
}

TEST_CASE("campbell density of the reference is one up to cap mass") {
  // On the truncated lattice the normalizer Z_x sums pi over states below
  // the cap, so the reference density is 1/(1 - P(eta_x = cap)) exactly,
  // and 1 only in the large-cap limit.
  ConfigLattice small(SiteSpace{{1.0, 0.5}, {5, 5}});
  const CampbellDensity cs = campbell_density(small, poisson_density(small));
  for (int x = 0; x < small.dim(); ++x) {
    CHECK(cs.defined[static_cast<std::size_t>(x)]);
    const auto& site = small.ref().site_pi[static_cast<std::size_t>(x)];
    const double want = 1.0 / (1.0 - site.back());
    for (std::size_t s = 0; s < small.states(); ++s)
      if (small.open(s, x))
        CHECK(cs.values[small.slot(x, s)] ==
              doctest::Approx(want).epsilon(1e-12));
  }

  ConfigLattice lat(SiteSpace{{1.0}, {16}});
  const CampbellDensity cd = campbell_density(lat, poisson_density(lat));
  CHECK(cd.defined[0]);
  for (std::size_t s = 0; s < lat.states(); ++s)
    if (lat.open(s, 0))
      CHECK(cd.values[lat.slot(0, s)] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("campbell density times pi and intensity recovers the measure") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {5, 5}});
  const Density mu = exp_perturbed_density(lat, 19, 0.5);
  const CampbellDensity cd = campbell_density(lat, mu);
  const FluxMeasure c = campbell_measure(lat, mu);
  const auto intens = intensity_measure(lat, mu);
  double worst = 0.0;
  for (int x = 0; x < lat.dim(); ++x)
    for (std::size_t s = 0; s < lat.states(); ++s) {
      const std::size_t e = lat.slot(x, s);
      const double built =
          cd.values[e] * lat.pi(s) * intens[static_cast<std::size_t>(x)];
      worst = std::max(worst, std::fabs(built - c.atoms[e]));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("campbell density flags sites with zero intensity") {
  ConfigLattice lat(SiteSpace{{1.0}, {4}});
  const CampbellDensity cd = campbell_density(lat, dirac_density(lat, {0}));
  CHECK_FALSE(cd.defined[0]);

  const CampbellDensity one = campbell_density(lat, dirac_density(lat, {1}));
  CHECK(one.defined[0]);
  CHECK(one.values[lat.slot(0, 0)] ==
        doctest::Approx(1.0 / lat.pi(0)).epsilon(1e-13));
}

TEST_CASE("Mecke identity at the reference measure") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {8, 8}});
  std::mt19937_64 eng(123);
  for (int rep = 0; rep < 100; ++rep) {
    const EdgeField u = random_edge_field(lat, eng);
    double lhs = 0.0;  // integral of u against pi (x) m
    double rhs = 0.0;  // sum over eta of pi(eta) sum_x eta_x u(eta - delta_x, x)
    for (std::size_t s = 0; s < lat.states(); ++s)
      for (int x = 0; x < lat.dim(); ++x) {
        if (lat.open(s, x)) lhs += u[lat.slot(x, s)] * lat.pim(x, s);
        const int n = lat.occ(s, x);
        if (n > 0) rhs += lat.pi(s) * n * u[lat.slot(x, lat.down(s, x))];
      }
    CHECK(std::fabs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("normalize rejects zero mass") {
  ConfigLattice lat(SiteSpace{{1.0}, {3}});
  Density zero{std::vector<double>(lat.states(), 0.0)};
  CHECK_THROWS_AS(normalize(lat, zero), std::domain_error);
}
