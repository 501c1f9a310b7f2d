#pragma once

#include <cstdint>
#include <vector>

#include "swaplab/rng.hpp"

namespace swaplab {

using Site = std::int64_t;

/// Closed integer interval of lattice sites [lo, hi].
struct SiteInterval {
  Site lo = 0;
  Site hi = 0;

  constexpr bool empty() const noexcept { return hi < lo; }
  constexpr bool contains(Site x) const noexcept { return lo <= x && x <= hi; }
  constexpr std::int64_t size() const noexcept { return empty() ? 0 : hi - lo + 1; }
  /// Edge (x, x+1) lies inside the window.
  constexpr bool has_edge(Site x) const noexcept { return lo <= x && x < hi; }
  constexpr std::int64_t edge_count() const noexcept { return empty() ? 0 : hi - lo; }

  friend constexpr bool operator==(const SiteInterval&, const SiteInterval&) = default;
};

/// Rate-1 Poisson ring times for every edge (x, x+1) of a site window.
///
/// The k-th ring of edge x is a pure function of (seed, x, k): gaps are Exp(1)
/// draws from a counter-based stream keyed by (seed, x). Streams are realized
/// lazily and memoized, so processes that read the edges in different orders
/// see identical clocks. A field is confined to one trial and is not
/// thread-safe.
class ClockField {
 public:
  ClockField(std::uint64_t seed, SiteInterval window);

  /// Smallest ring time of edge (edge, edge+1) strictly greater than `after`.
  double next_ring(Site edge, double after);

  /// The index-th ring time (0-based) of the edge.
  double ring(Site edge, std::size_t index);

  std::uint64_t seed() const noexcept { return seed_; }
  const SiteInterval& window() const noexcept { return window_; }

  /// Number of ring times realized so far on an edge.
  std::size_t realized(Site edge) const;

 private:
  struct Stream {
    std::uint64_t key = 0;
    std::vector<double> times;
    std::size_t cursor = 0;  // first index whose time exceeded the last query
  };

  Stream& stream(Site edge);
  void extend(Stream& s, Site edge);

  std::uint64_t seed_;
  SiteInterval window_;
  std::vector<Stream> streams_;
};

}  // namespace swaplab
