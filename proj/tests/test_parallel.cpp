#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ptrans/parallel.hpp"

using namespace ptrans;

TEST_CASE("deterministic sum matches naive accumulation") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(100001);
  for (double& v : x) v = u(eng);
  const double a = det_sum(x);
  const double b = serial_sum(x.data(), x.size());
  CHECK(std::fabs(a - b) <= 1e-13 * (std::fabs(b) + 1.0));
}

TEST_CASE("deterministic sum is independent of thread count") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(50000);
  for (double& v : x) v = u(eng);
  set_threads(1);
  const double s1 = det_sum(x);
  set_threads(4);
  const double s4 = det_sum(x);
  set_threads(1);
  CHECK(s1 == s4);
}

TEST_CASE("small and empty sums") {
  CHECK(det_sum(nullptr, 0) == 0.0);
  std::vector<double> x{1.5};
  CHECK(det_sum(x) == 1.5);
  std::vector<double> y{1.0, 2.0, 3.0, 4.0};
  CHECK(det_sum(y) == 10.0);
}

TEST_CASE("dot product and max_abs") {
  std::vector<double> x{1.0, -2.0, 3.0};
  std::vector<double> y{4.0, 5.0, -6.0};
  CHECK(det_dot(x, y) == doctest::Approx(4.0 - 10.0 - 18.0));
  CHECK(max_abs(y) == 6.0);
}
