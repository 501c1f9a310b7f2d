#include "swaplab/tasep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>

#include "swaplab/errors.hpp"

namespace swaplab {

Color ColoredTasepState::color_at(Site x) const {
  if (!window.contains(x)) throw DomainError("site outside state window");
  return colors[static_cast<std::size_t>(x - window.lo)];
}

ColoredTasepState identity_state(SiteInterval window) {
  if (window.empty()) throw ConfigError("empty window");
  ColoredTasepState s{window, {}, 0.0};
  s.colors.reserve(static_cast<std::size_t>(window.size()));
  for (Site x = window.lo; x <= window.hi; ++x) s.colors.push_back(x);
  return s;
}

std::int64_t height_function(const ColoredTasepState& state, Color a, Site b) {
  if (!state.window.contains(b)) {
    throw DomainError("height_function: site " + std::to_string(b) + " outside window");
  }
  std::int64_t h = 0;
  for (Site x = b; x <= state.window.hi; ++x) {
    if (state.colors[static_cast<std::size_t>(x - state.window.lo)] <= a) ++h;
  }
  return h;
}

bool rectangle_leq(const RectangleSpec& r1, const RectangleSpec& r2) {
  return r1.a <= r2.a && r1.a + r1.b >= r2.a + r2.b && r1.a - r1.c >= r2.a - r2.c;
}

namespace {

std::vector<Color> projection_colors(ProjectionSpec spec, SiteInterval window) {
  const SiteInterval init = spec.initial_sites();
  if (!(window.contains(init.lo) && window.contains(init.hi))) {
    throw ConfigError("projection initial sites not inside the simulation window");
  }
  std::vector<Color> colors(static_cast<std::size_t>(window.size()), kHole);
  for (std::int64_t i = 1; i <= spec.particle_count; ++i) {
    colors[static_cast<std::size_t>(init.lo + i - 1 - window.lo)] = i;
  }
  return colors;
}

void validate_query(const PassageQuery& q) {
  if (q.b < 1 || q.c < 1) throw DomainError("passage query needs B, C >= 1");
}

/// Incremental resolver for passage times against a projection's swap stream.
class QueryTracker {
 public:
  QueryTracker(ProjectionSpec proj, std::span<const PassageQuery> queries,
               const std::vector<Color>& colors, SiteInterval window)
      : times_(queries.size(), std::numeric_limits<double>::quiet_NaN()) {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const PassageQuery& q = queries[i];
      validate_query(q);
      if (q.a > proj.base_color || q.a - q.c < proj.base_color - proj.particle_count) {
        throw DomainError("query T^" + std::to_string(q.a) + "_{" + std::to_string(q.b) + "," +
                          std::to_string(q.c) + "} not determined by the projection");
      }
      Entry e{q.a - proj.base_color + proj.particle_count, q.c, 0, i};
      for (Site x = std::max(q.target_site(), window.lo); x <= window.hi; ++x) {
        if (colors[static_cast<std::size_t>(x - window.lo)] <= e.threshold) ++e.count;
      }
      by_site_[q.target_site()].push_back(e);
      ++open_;
    }
  }

  bool done() const noexcept { return open_ == 0; }

  void observe(const SwapEvent& ev) {
    const auto it = by_site_.find(ev.site + 1);
    if (it == by_site_.end()) return;
    for (Entry& e : it->second) {
      if (e.count >= e.needed) continue;
      if (ev.stronger <= e.threshold && ev.weaker > e.threshold) {
        if (++e.count == e.needed) {
          times_[e.index] = ev.time;
          --open_;
        }
      }
    }
  }

  std::vector<double> take() && { return std::move(times_); }

 private:
  struct Entry {
    Color threshold;
    std::int64_t needed;
    std::int64_t count;
    std::size_t index;
  };
  std::unordered_map<Site, std::vector<Entry>> by_site_;
  std::vector<double> times_;
  std::size_t open_ = 0;
};

}  // namespace

TasepRun simulate_finite_colored(ClockField& field, ProjectionSpec spec, double horizon) {
  if (horizon < 0.0 || std::isnan(horizon)) throw DomainError("horizon must be >= 0");
  if (spec.particle_count < 1) throw ConfigError("projection needs C >= 1");
  const SiteInterval window = field.window();
  TasepRun run;
  run.spec = spec;
  run.initial = {window, projection_colors(spec, window), 0.0};
  ColoredExclusion sim(field, window, run.initial.colors);
  sim.run(horizon, [&](const SwapEvent& ev) {
    run.events.push_back(ev);
    return true;
  });
  run.final_state = {window, std::vector<Color>(sim.colors().begin(), sim.colors().end()),
                     std::isinf(horizon) ? sim.time() : horizon};
  return run;
}

ProjectionSpec covering_projection(std::span<const PassageQuery> queries) {
  if (queries.empty()) throw ConfigError("no passage queries");
  std::int64_t a_star = std::numeric_limits<std::int64_t>::min();
  std::int64_t low = std::numeric_limits<std::int64_t>::max();
  for (const auto& q : queries) {
    validate_query(q);
    a_star = std::max(a_star, q.a);
    low = std::min(low, q.a - q.c);
  }
  return {a_star, a_star - low};
}

SiteInterval covering_window(std::span<const PassageQuery> queries) {
  const ProjectionSpec p = covering_projection(queries);
  Site hi = p.base_color;
  for (const auto& q : queries) hi = std::max(hi, q.a + q.b);
  return {p.initial_sites().lo, hi + 1};
}

std::vector<double> passage_times(ClockField& field, std::span<const PassageQuery> queries) {
  const ProjectionSpec proj = covering_projection(queries);
  const SiteInterval need = covering_window(queries);
  const SiteInterval& fw = field.window();
  if (fw.lo > need.lo || fw.hi < need.hi - 1) {
    throw ConfigError("clock field window does not cover the passage queries");
  }
  const SiteInterval window{need.lo, std::min(fw.hi, need.hi)};
  std::vector<Color> colors = projection_colors(proj, window);
  QueryTracker tracker(proj, queries, colors, window);
  ColoredExclusion sim(field, window, std::move(colors));
  while (!tracker.done()) {
    if (std::isinf(sim.next_event_time())) {
      throw InvariantError("projection froze before all passage times were reached");
    }
    tracker.observe(sim.step());
  }
  return std::move(tracker).take();
}

std::vector<double> sample_passage_times(std::uint64_t seed, std::span<const PassageQuery> queries) {
  ClockField field(seed, covering_window(queries));
  return passage_times(field, queries);
}

double recover_passage_time(const TasepRun& run, const PassageQuery& q) {
  const PassageQuery one[] = {q};
  QueryTracker tracker(run.spec, one, run.initial.colors, run.initial.window);
  for (const SwapEvent& ev : run.events) {
    tracker.observe(ev);
    if (tracker.done()) break;
  }
  if (!tracker.done()) throw DomainError("passage time not reached within the recorded log");
  return std::move(tracker).take()[0];
}

PassageTimeTable::PassageTimeTable(std::int64_t base_color, int b_max, int c_max)
    : PassageTimeTable(base_color, b_max, c_max,
                       std::vector<double>(static_cast<std::size_t>(std::max(b_max, 0)) *
                                               static_cast<std::size_t>(std::max(c_max, 0)),
                                           0.0)) {}

PassageTimeTable::PassageTimeTable(std::int64_t base_color, int b_max, int c_max,
                                   std::vector<double> times)
    : base_color_(base_color), b_max_(b_max), c_max_(c_max), times_(std::move(times)) {
  if (b_max < 1 || c_max < 1) throw ConfigError("passage table needs positive dimensions");
  if (times_.size() != static_cast<std::size_t>(b_max) * static_cast<std::size_t>(c_max)) {
    throw ConfigError("passage table size mismatch");
  }
}

double PassageTimeTable::at(int b, int c) const {
  if (b == 0 || c == 0) return 0.0;
  if (b < 0 || c < 0 || b > b_max_ || c > c_max_) throw DomainError("passage table index out of range");
  return times_[static_cast<std::size_t>(b - 1) * static_cast<std::size_t>(c_max_) +
                static_cast<std::size_t>(c - 1)];
}

void PassageTimeTable::set(int b, int c, double t) {
  if (b < 1 || c < 1 || b > b_max_ || c > c_max_) throw DomainError("passage table index out of range");
  times_[static_cast<std::size_t>(b - 1) * static_cast<std::size_t>(c_max_) +
         static_cast<std::size_t>(c - 1)] = t;
}

bool PassageTimeTable::satisfies_recursion() const {
  for (int b = 1; b <= b_max_; ++b) {
    for (int c = 1; c <= c_max_; ++c) {
      if (!(at(b, c) > std::max(at(b - 1, c), at(b, c - 1)))) return false;
    }
  }
  return true;
}

std::string PassageTimeTable::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "B,C,time\n";
  for (int b = 1; b <= b_max_; ++b) {
    for (int c = 1; c <= c_max_; ++c) os << b << ',' << c << ',' << at(b, c) << '\n';
  }
  return os.str();
}

SiteInterval table_window(std::int64_t a, int b_max, int c_max) {
  return {a - c_max + 1, a + b_max + 1};
}

PassageTimeTable passage_time_table(ClockField& field, std::int64_t a, int b_max, int c_max) {
  if (b_max < 1 || c_max < 1) throw ConfigError("passage table needs positive dimensions");
  std::vector<PassageQuery> queries;
  queries.reserve(static_cast<std::size_t>(b_max) * static_cast<std::size_t>(c_max));
  for (int b = 1; b <= b_max; ++b) {
    for (int c = 1; c <= c_max; ++c) queries.push_back({a, b, c});
  }
  return PassageTimeTable(a, b_max, c_max, passage_times(field, queries));
}

std::int64_t tasep_height(std::uint64_t seed, std::int64_t a, Site b, double t) {
  if (t < 0.0) throw DomainError("tasep_height: negative time");
  const std::int64_t initial = std::max<std::int64_t>(0, a - b + 1);
  auto slack = static_cast<std::int64_t>(std::ceil(t + 6.0 * std::sqrt(t) + 10.0));
  while (true) {
    const ProjectionSpec proj{a, initial + slack};
    const SiteInterval window{proj.initial_sites().lo, std::max(a, b + proj.particle_count)};
    ClockField field(seed, window);
    ColoredExclusion sim(field, window, projection_colors(proj, window));
    sim.run(t);
    std::int64_t count = 0;
    for (Site x = std::max(b, window.lo); x <= window.hi; ++x) {
      if (sim.color_at(x) != kHole) ++count;
    }
    if (count < proj.particle_count) return count;
    slack *= 2;
  }
}

}  // namespace swaplab
