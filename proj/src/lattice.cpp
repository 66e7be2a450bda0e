#include "ptrans/lattice.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ptrans/parallel.hpp"

namespace ptrans {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

template <class T>
std::uint64_t fnv1a_value(std::uint64_t h, T v) {
  return fnv1a(h, &v, sizeof v);
}

// Untruncated Poisson(m) pmf on 0..cap plus the mass above cap. The pmf is
// generated by the forward recurrence p_{n+1} = p_n m/(n+1); every term is
// positive, so no cancellation occurs in the tail sum.
void site_tables(double m, int cap, std::vector<double>& pmf, double& tail) {
  pmf.assign(static_cast<std::size_t>(cap) + 1, 0.0);
  // log-space seed avoids underflow of e^{-m} for large m
  double log_p = -m;
  pmf[0] = std::exp(log_p);
  for (int n = 0; n < cap; ++n)
    pmf[static_cast<std::size_t>(n) + 1] =
        pmf[static_cast<std::size_t>(n)] * m / (n + 1);
  tail = 0.0;
  double term = pmf[static_cast<std::size_t>(cap)];
  for (int n = cap; n < cap + 100000; ++n) {
    term *= m / (n + 1);
    tail += term;
    if (n > m && term < tail * 1e-22) break;
    if (term == 0.0) break;
  }
}

}  // namespace

ConfigLattice::ConfigLattice(SiteSpace sites, std::size_t state_budget)
    : sites_(std::move(sites)) {
  const int d = sites_.dim();
  if (d <= 0 || sites_.cap.size() != sites_.m.size())
    throw std::invalid_argument("lattice: m and cap must be non-empty and equal length");
  for (int x = 0; x < d; ++x) {
    if (!(sites_.m[static_cast<std::size_t>(x)] > 0.0))
      throw std::invalid_argument("lattice: every site intensity must be > 0");
    if (sites_.cap[static_cast<std::size_t>(x)] < 1)
      throw std::invalid_argument("lattice: every cap must be >= 1");
  }

  radix_.resize(static_cast<std::size_t>(d));
  for (int x = 0; x < d; ++x)
    radix_[static_cast<std::size_t>(x)] =
        static_cast<std::size_t>(sites_.cap[static_cast<std::size_t>(x)]) + 1;
  std::size_t count = 1;
  for (int x = 0; x < d; ++x) {
    const std::size_t r = radix_[static_cast<std::size_t>(x)];
    if (count > state_budget / r) {
      std::ostringstream os;
      os << "lattice: state count ";
      for (int y = 0; y < d; ++y)
        os << (y ? " * " : "") << radix_[static_cast<std::size_t>(y)];
      os << " exceeds state budget " << state_budget;
      throw std::length_error(os.str());
    }
    count *= r;
  }
  states_ = count;

  stride_.assign(static_cast<std::size_t>(d), 1);
  for (int x = d - 2; x >= 0; --x)
    stride_[static_cast<std::size_t>(x)] =
        stride_[static_cast<std::size_t>(x) + 1] * radix_[static_cast<std::size_t>(x) + 1];

  edges_ = 0;
  for (int x = 0; x < d; ++x)
    edges_ += (states_ / radix_[static_cast<std::size_t>(x)]) *
              static_cast<std::size_t>(cap(x));

  ref_.site_pi.resize(static_cast<std::size_t>(d));
  ref_.tail.resize(static_cast<std::size_t>(d));
  std::vector<std::vector<double>> site_log(static_cast<std::size_t>(d));
  for (int x = 0; x < d; ++x) {
    auto& pmf = ref_.site_pi[static_cast<std::size_t>(x)];
    site_tables(m(x), cap(x), pmf, ref_.tail[static_cast<std::size_t>(x)]);
    double z = 0.0;
    for (double p : pmf) z += p;
    auto& lg = site_log[static_cast<std::size_t>(x)];
    lg.resize(pmf.size());
    for (std::size_t n = 0; n < pmf.size(); ++n) {
      pmf[n] /= z;
      lg[n] = std::log(pmf[n]);
    }
  }

  ref_.pi.resize(states_);
  ref_.log_pi.resize(states_);
  parallel_for(states_, [&](std::size_t s) {
    double lp = 0.0;
    for (int x = 0; x < d; ++x)
      lp += site_log[static_cast<std::size_t>(x)][static_cast<std::size_t>(occ(s, x))];
    ref_.log_pi[s] = lp;
    ref_.pi[s] = std::exp(lp);
  });

  std::uint64_t h = fnv1a(0xcbf29ce484222325ull, "ptrans.lattice.v1", 17);
  h = fnv1a_value(h, static_cast<std::int64_t>(d));
  for (int x = 0; x < d; ++x) {
    h = fnv1a_value(h, static_cast<std::int64_t>(cap(x)));
    h = fnv1a_value(h, m(x));
  }
  hash_ = h;
}

std::size_t ConfigLattice::encode(const std::vector<int>& eta) const {
  if (eta.size() != static_cast<std::size_t>(dim()))
    throw std::invalid_argument("encode: configuration has wrong dimension");
  std::size_t s = 0;
  for (int x = 0; x < dim(); ++x) {
    const int n = eta[static_cast<std::size_t>(x)];
    if (n < 0 || n > cap(x))
      throw std::out_of_range("encode: occupancy outside [0, cap]");
    s += static_cast<std::size_t>(n) * stride_[static_cast<std::size_t>(x)];
  }
  return s;
}

std::vector<int> ConfigLattice::decode(std::size_t s) const {
  if (s >= states_) throw std::out_of_range("decode: state index out of range");
  std::vector<int> eta(static_cast<std::size_t>(dim()));
  for (int x = 0; x < dim(); ++x) eta[static_cast<std::size_t>(x)] = occ(s, x);
  return eta;
}

double ConfigLattice::max_tail_mass() const {
  double t = 0.0;
  for (double v : ref_.tail) t = std::max(t, v);
  return t;
}

double ConfigLattice::detailed_balance_residual() const {
  double worst = 0.0;
  for (int x = 0; x < dim(); ++x) {
    for (std::size_t s = 0; s < states_; ++s) {
      if (!open(s, x)) continue;
      const double lhs = pi(s) * m(x);
      const double rhs = pi(up(s, x)) * (occ(s, x) + 1);
      worst = std::max(worst, std::fabs(lhs - rhs) / lhs);
    }
  }
  return worst;
}

}  // namespace ptrans
