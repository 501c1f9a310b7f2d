#include "swaplab/clock_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swaplab/errors.hpp"

namespace swaplab {

ClockField::ClockField(std::uint64_t seed, SiteInterval window)
    : seed_(seed), window_(window) {
  if (window.empty()) {
    throw ConfigError("clock field window is empty: [" + std::to_string(window.lo) +
                      ", " + std::to_string(window.hi) + "]");
  }
  streams_.resize(static_cast<std::size_t>(window.edge_count()));
  for (std::size_t i = 0; i < streams_.size(); ++i) {
    // Keys depend on the absolute edge position, not on the window, so two
    // fields with the same seed agree on every shared edge.
    const Site edge = window.lo + static_cast<Site>(i);
    streams_[i].key = derive_key(seed, static_cast<std::uint64_t>(edge), 0xC10C);
  }
}

ClockField::Stream& ClockField::stream(Site edge) {
  if (!window_.has_edge(edge)) {
    throw DomainError("edge (" + std::to_string(edge) + ", " + std::to_string(edge + 1) +
                      ") outside clock window [" + std::to_string(window_.lo) + ", " +
                      std::to_string(window_.hi) + "]");
  }
  return streams_[static_cast<std::size_t>(edge - window_.lo)];
}

std::size_t ClockField::realized(Site edge) const {
  if (!window_.has_edge(edge)) throw DomainError("edge outside clock window");
  return streams_[static_cast<std::size_t>(edge - window_.lo)].times.size();
}

void ClockField::extend(Stream& s, Site edge) {
  const double prev = s.times.empty() ? 0.0 : s.times.back();
  const double gap = -std::log(CounterRng::to_open_unit(CounterRng::at(s.key, s.times.size())));
  const double next = prev + gap;
  if (!(next > prev)) {
    throw InvariantError("ring times on edge " + std::to_string(edge) +
                         " failed to increase strictly at index " +
                         std::to_string(s.times.size()));
  }
  s.times.push_back(next);
}

double ClockField::next_ring(Site edge, double after) {
  if (after < 0.0 || std::isnan(after)) throw DomainError("next_ring: negative query time");
  Stream& s = stream(edge);
  // Fast path: queries on one edge are usually non-decreasing in time.
  if (s.cursor > 0 && s.times[s.cursor - 1] > after) {
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), after);
    s.cursor = static_cast<std::size_t>(it - s.times.begin());
  }
  while (true) {
    while (s.cursor < s.times.size() && s.times[s.cursor] <= after) ++s.cursor;
    if (s.cursor < s.times.size()) return s.times[s.cursor];
    extend(s, edge);
  }
}

double ClockField::ring(Site edge, std::size_t index) {
  Stream& s = stream(edge);
  while (s.times.size() <= index) extend(s, edge);
  return s.times[index];
}

}  // namespace swaplab
