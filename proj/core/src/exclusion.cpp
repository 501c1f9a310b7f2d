#include "swaplab/exclusion.hpp"

#include <string>
#include <utility>

#include "swaplab/errors.hpp"

namespace swaplab {

ColoredExclusion::ColoredExclusion(ClockField& field, SiteInterval window,
                                   std::vector<Color> initial)
    : field_(&field), window_(window), colors_(std::move(initial)) {
  if (window.empty()) throw ConfigError("exclusion window is empty");
  if (static_cast<std::int64_t>(colors_.size()) != window.size()) {
    throw ConfigError("initial configuration size does not match window");
  }
  const SiteInterval& fw = field.window();
  if (window.edge_count() > 0 && (window.lo < fw.lo || window.hi > fw.hi)) {
    throw ConfigError("exclusion window [" + std::to_string(window.lo) + ", " +
                      std::to_string(window.hi) + "] not covered by clock field [" +
                      std::to_string(fw.lo) + ", " + std::to_string(fw.hi) + "]");
  }
  const auto edges = static_cast<std::size_t>(window.edge_count());
  scheduled_.assign(edges, -1.0);
  for (std::size_t e = 0; e < edges; ++e) {
    if (enabled(static_cast<std::int64_t>(e))) {
      ++ascents_;
      refresh(static_cast<std::int64_t>(e));
    }
  }
}

Color ColoredExclusion::color_at(Site x) const {
  if (!window_.contains(x)) throw DomainError("site outside exclusion window");
  return colors_[static_cast<std::size_t>(x - window_.lo)];
}

void ColoredExclusion::refresh(std::int64_t e) {
  if (!enabled(e) || scheduled_[e] >= 0.0) return;
  const double t = field_->next_ring(window_.lo + e, time_);
  scheduled_[e] = t;
  queue_.push({t, e});
}

void ColoredExclusion::drop_stale() {
  while (!queue_.empty()) {
    const Pending& top = queue_.top();
    if (scheduled_[top.edge] == top.time && enabled(top.edge)) return;
    if (scheduled_[top.edge] == top.time) {
      // The edge was disabled before its ring; the ring is wasted.
      scheduled_[top.edge] = -1.0;
    }
    queue_.pop();
  }
}

double ColoredExclusion::next_event_time() {
  drop_stale();
  return queue_.empty() ? std::numeric_limits<double>::infinity() : queue_.top().time;
}

SwapEvent ColoredExclusion::step() {
  drop_stale();
  if (queue_.empty()) throw InvariantError("step() on a frozen configuration");
  const Pending p = queue_.top();
  queue_.pop();
  if (p.time == last_ring_) {
    throw TieError("coincident clock rings at time " + std::to_string(p.time));
  }
  last_ring_ = p.time;
  scheduled_[p.edge] = -1.0;
  time_ = p.time;

  const std::int64_t e = p.edge;
  const std::int64_t last = static_cast<std::int64_t>(scheduled_.size()) - 1;
  auto count = [&](std::int64_t f) -> std::int64_t {
    return (f >= 0 && f <= last && enabled(f)) ? 1 : 0;
  };
  const std::int64_t before = count(e - 1) + count(e) + count(e + 1);

  SwapEvent ev{p.time, window_.lo + e, colors_[e], colors_[e + 1]};
  std::swap(colors_[e], colors_[e + 1]);

  ascents_ += count(e - 1) + count(e) + count(e + 1) - before;
  if (e > 0) refresh(e - 1);
  if (e < last) refresh(e + 1);
  return ev;
}

}  // namespace swaplab
