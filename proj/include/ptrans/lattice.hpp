#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ptrans {

// Base space: d sites, each carrying an intensity weight m_x > 0 and an
// occupancy cap. States are occupancy vectors eta with 0 <= eta_x <= cap_x.
struct SiteSpace {
  std::vector<double> m;
  std::vector<int> cap;

  int dim() const { return static_cast<int>(m.size()); }
};

// Truncated product-Poisson reference measure on the enumerated states.
// Per-site weights are the untruncated pmf renormalized below the cap;
// tail[x] is the untruncated Poisson(m_x) mass above cap_x, kept so that
// downstream tolerances can be tied to the truncation error.
struct ReferenceMeasure {
  std::vector<double> pi;       // per state, sums to 1
  std::vector<double> log_pi;   // per state
  std::vector<std::vector<double>> site_pi;  // [x][n], n = 0..cap_x
  std::vector<double> tail;     // per site
};

inline constexpr std::size_t kDefaultStateBudget = std::size_t{1} << 22;

// Enumerated truncated configuration space.
//
// States are indexed lexicographically (site 0 most significant): index(eta)
// = sum_x eta_x * stride(x). Directed edges (eta, eta + delta_x) exist
// exactly where eta_x < cap_x; edge-indexed data lives in dense "slot"
// arrays of size dim()*states() with slot(x, s) = x*states() + s, where
// entries at closed slots (eta_x = cap_x) are identically zero. This keeps
// every edge lookup O(1) at the cost of storing the zero slots.
class ConfigLattice {
 public:
  explicit ConfigLattice(SiteSpace sites,
                         std::size_t state_budget = kDefaultStateBudget);

  int dim() const { return sites_.dim(); }
  std::size_t states() const { return states_; }
  std::size_t slots() const { return states_ * static_cast<std::size_t>(dim()); }
  std::size_t edges() const { return edges_; }

  double m(int x) const { return sites_.m[static_cast<std::size_t>(x)]; }
  int cap(int x) const { return sites_.cap[static_cast<std::size_t>(x)]; }
  const SiteSpace& sites() const { return sites_; }

  std::size_t stride(int x) const { return stride_[static_cast<std::size_t>(x)]; }

  int occ(std::size_t s, int x) const {
    return static_cast<int>((s / stride_[static_cast<std::size_t>(x)]) %
                            radix_[static_cast<std::size_t>(x)]);
  }
  bool open(std::size_t s, int x) const { return occ(s, x) < cap(x); }
  std::size_t up(std::size_t s, int x) const {
    return s + stride_[static_cast<std::size_t>(x)];
  }
  std::size_t down(std::size_t s, int x) const {
    return s - stride_[static_cast<std::size_t>(x)];
  }
  std::size_t slot(int x, std::size_t s) const {
    return static_cast<std::size_t>(x) * states_ + s;
  }

  std::size_t encode(const std::vector<int>& eta) const;
  std::vector<int> decode(std::size_t s) const;

  const ReferenceMeasure& ref() const { return ref_; }
  double pi(std::size_t s) const { return ref_.pi[s]; }
  double log_pi(std::size_t s) const { return ref_.log_pi[s]; }
  // Weight pi(eta) m_x carried by the slot (x, eta).
  double pim(int x, std::size_t s) const { return ref_.pi[s] * m(x); }
  double tail_mass(int x) const { return ref_.tail[static_cast<std::size_t>(x)]; }
  double max_tail_mass() const;

  // max over edges of |pi(eta) m_x - pi(eta+delta_x)(eta_x+1)| / pi(eta) m_x
  double detailed_balance_residual() const;

  // FNV-1a over (d, caps, m bit patterns); identifies the lattice in
  // artifact headers.
  std::uint64_t hash() const { return hash_; }

 private:
  SiteSpace sites_;
  std::vector<std::size_t> stride_;
  std::vector<std::size_t> radix_;  // cap + 1 per site
  std::size_t states_ = 0;
  std::size_t edges_ = 0;
  ReferenceMeasure ref_;
  std::uint64_t hash_ = 0;
};

}  // namespace ptrans
