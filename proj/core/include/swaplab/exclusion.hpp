#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "swaplab/clock_field.hpp"

namespace swaplab {

using Color = std::int64_t;
/// Holes carry the weakest possible color.
inline constexpr Color kHole = std::numeric_limits<Color>::max();

/// One successful swap across edge (site, site+1). `stronger` moved right.
struct SwapEvent {
  double time = 0.0;
  Site site = 0;
  Color stronger = 0;
  Color weaker = 0;
};

/// Event-driven colored exclusion on a finite window: whenever the clock of
/// edge (x, x+1) rings and color(x) < color(x+1), the two colors swap.
///
/// Only enabled edges (ascents) are scheduled; each pulls its next ring from
/// the shared ClockField, so the run is a deterministic function of the field.
/// Edges outside the window do not exist, which makes the window ends
/// reflecting walls.
class ColoredExclusion {
 public:
  ColoredExclusion(ClockField& field, SiteInterval window, std::vector<Color> initial);

  /// Time of the next swap, or +inf when the configuration is frozen.
  double next_event_time();
  /// Performs the next swap. Precondition: next_event_time() is finite.
  SwapEvent step();

  /// Runs every swap with time <= horizon. `on_swap(const SwapEvent&)` may
  /// return false to stop early. Returns the number of swaps performed.
  template <class Visitor>
  std::size_t run(double horizon, Visitor&& on_swap) {
    std::size_t n = 0;
    for (double t = next_event_time(); t <= horizon && t < std::numeric_limits<double>::infinity(); t = next_event_time()) {
      ++n;
      if (!on_swap(step())) break;
    }
    return n;
  }

  std::size_t run(double horizon) {
    return run(horizon, [](const SwapEvent&) { return true; });
  }

  double time() const noexcept { return time_; }
  const SiteInterval& window() const noexcept { return window_; }
  std::span<const Color> colors() const noexcept { return colors_; }
  Color color_at(Site x) const;
  /// Number of edges with color(x) < color(x+1).
  std::int64_t ascents() const noexcept { return ascents_; }

 private:
  struct Pending {
    double time;
    std::int64_t edge;
    bool operator>(const Pending& o) const noexcept { return time > o.time; }
  };

  bool enabled(std::int64_t e) const noexcept { return colors_[e] < colors_[e + 1]; }
  void refresh(std::int64_t e);
  void drop_stale();

  ClockField* field_;
  SiteInterval window_;
  std::vector<Color> colors_;
  std::vector<double> scheduled_;  // pending ring per edge, or -1
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  double time_ = 0.0;
  double last_ring_ = -1.0;
  std::int64_t ascents_ = 0;
};

}  // namespace swaplab
