#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "ptrans/lattice.hpp"
#include "ptrans/parallel.hpp"

using namespace ptrans;

TEST_CASE("one-site chain enumerates states and edges") {
  ConfigLattice lat(SiteSpace{{1.0}, {2}});
  CHECK(lat.states() == 3);
  CHECK(lat.edges() == 2);
  CHECK(lat.occ(0, 0) == 0);
  CHECK(lat.occ(2, 0) == 2);
  CHECK(lat.open(0, 0));
  CHECK(lat.open(1, 0));
  CHECK_FALSE(lat.open(2, 0));
  CHECK(lat.up(0, 0) == 1);
  CHECK(lat.up(1, 0) == 2);
}

TEST_CASE("two-by-two lattice") {
  ConfigLattice lat(SiteSpace{{1.0, 1.0}, {1, 1}});
  CHECK(lat.states() == 4);
  CHECK(lat.edges() == 4);
}

TEST_CASE("three-site cube of caps 12") {
  ConfigLattice lat(SiteSpace{{1.0, 1.0, 1.0}, {12, 12, 12}});
  CHECK(lat.states() == 2197);
}

TEST_CASE("encode and decode are inverse, lexicographic order") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {2, 3}});
  CHECK(lat.encode({0, 0}) == 0);
  CHECK(lat.encode({0, 1}) == 1);  // site 0 most significant
  CHECK(lat.encode({1, 0}) == 4);
  for (std::size_t s = 0; s < lat.states(); ++s)
    CHECK(lat.encode(lat.decode(s)) == s);
  CHECK_THROWS_AS((void)lat.encode({3, 0}), std::out_of_range);
  CHECK_THROWS_AS((void)lat.encode({0}), std::invalid_argument);
  CHECK_THROWS_AS((void)lat.decode(lat.states()), std::out_of_range);
}

TEST_CASE("state budget violations name the offending product") {
  SiteSpace big{std::vector<double>(10, 1.0), std::vector<int>(10, 8)};
  try {
    ConfigLattice lat(big);
    FAIL("construction should have thrown");
  } catch (const std::length_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("9 * 9") != std::string::npos);
    CHECK(msg.find("budget") != std::string::npos);
  }
}

TEST_CASE("invalid site spaces are rejected") {
  CHECK_THROWS_AS(ConfigLattice(SiteSpace{{}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(ConfigLattice(SiteSpace{{0.0}, {2}}), std::invalid_argument);
  CHECK_THROWS_AS(ConfigLattice(SiteSpace{{1.0}, {0}}), std::invalid_argument);
  CHECK_THROWS_AS(ConfigLattice(SiteSpace{{1.0, 1.0}, {2}}),
                  std::invalid_argument);
}

TEST_CASE("reference weights on tiny chains match closed forms") {
  ConfigLattice a(SiteSpace{{1.0}, {1}});
  CHECK(a.pi(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(a.pi(1) == doctest::Approx(0.5).epsilon(1e-14));

  ConfigLattice b(SiteSpace{{1.0}, {2}});
  CHECK(b.pi(0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(b.pi(1) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(b.pi(2) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("reference measure normalizes and reports tiny tails") {
  ConfigLattice lat(SiteSpace{{1.0}, {16}});
  CHECK(std::fabs(det_sum(lat.ref().pi) - 1.0) < 1e-14);
  CHECK(std::fabs(lat.pi(0) - std::exp(-1.0)) < 1e-7);
  CHECK(lat.tail_mass(0) < 1e-13);
  CHECK(lat.max_tail_mass() < 1e-13);
}

TEST_CASE("detailed balance holds to round-off") {
  ConfigLattice lat(SiteSpace{{1.0, 0.5}, {8, 8}});
  CHECK(lat.detailed_balance_residual() < 1e-12);
  CHECK(std::fabs(det_sum(lat.ref().pi) - 1.0) < 1e-14);
}

TEST_CASE("lattice hash identifies the site space") {
  ConfigLattice a(SiteSpace{{1.0, 0.5}, {8, 8}});
  ConfigLattice b(SiteSpace{{1.0, 0.5}, {8, 8}});
  ConfigLattice c(SiteSpace{{1.0, 0.6}, {8, 8}});
  ConfigLattice d(SiteSpace{{1.0, 0.5}, {8, 9}});
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash() != d.hash());
}
