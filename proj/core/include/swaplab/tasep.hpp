#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swaplab/clock_field.hpp"
#include "swaplab/exclusion.hpp"

namespace swaplab {

/// Snapshot of a colored configuration on a window. Colors are either finite
/// (particles, pairwise distinct) or kHole.
struct ColoredTasepState {
  SiteInterval window;
  std::vector<Color> colors;
  double time = 0.0;

  Color color_at(Site x) const;
};

/// The identity configuration zeta_0 on a window: color(x) = x.
ColoredTasepState identity_state(SiteInterval window);

/// Number of sites x >= b in the window carrying a color <= a, i.e. h_{a,b}.
std::int64_t height_function(const ColoredTasepState& state, Color a, Site b);

/// Finite colored projection: the C rightmost particles of mu^A, recolored
/// 1..C from left to right, all other sites holes.
struct ProjectionSpec {
  std::int64_t base_color = 0;      // A
  std::int64_t particle_count = 1;  // C

  SiteInterval initial_sites() const { return {base_color - particle_count + 1, base_color}; }
};

/// Index bookkeeping for the lattice rectangle [1+A, B-A] x [1+A, C-A].
struct RectangleSpec {
  std::int64_t a = 0;
  std::int64_t b = 1;
  std::int64_t c = 1;

  friend bool operator==(const RectangleSpec&, const RectangleSpec&) = default;
};

/// Partial order on rectangles: projection on the first axis contains the
/// other's, projection on the second axis is contained in the other's.
bool rectangle_leq(const RectangleSpec& r1, const RectangleSpec& r2);

/// Swap log of a finite colored projection.
struct TasepRun {
  ProjectionSpec spec;
  ColoredTasepState initial;
  std::vector<SwapEvent> events;
  ColoredTasepState final_state;
};

/// Simulates the projection hat-mu^{A,C} on the field's window until `horizon`
/// (may be +inf: runs until the configuration freezes against the right wall).
TasepRun simulate_finite_colored(ClockField& field, ProjectionSpec spec, double horizon);

/// Passage time T^A_{B,C}.
struct PassageQuery {
  std::int64_t a = 0;
  std::int64_t b = 1;
  std::int64_t c = 1;

  /// The site A+B+1-C that C particles of mu^A must reach or pass.
  Site target_site() const { return a + b + 1 - c; }
};

/// Smallest projection that determines every query: A* = max A,
/// C* = A* - min(A - C).
ProjectionSpec covering_projection(std::span<const PassageQuery> queries);

/// Window on which the projection resolves every query exactly: left end at
/// the leftmost initial particle, right end at max(A+B) plus one site of slack.
SiteInterval covering_window(std::span<const PassageQuery> queries);

/// Computes all queries from one shared-clock simulation of the covering
/// projection. The field window must contain covering_window(queries).
std::vector<double> passage_times(ClockField& field, std::span<const PassageQuery> queries);

/// Convenience wrapper: builds the field for `seed` on the covering window.
std::vector<double> sample_passage_times(std::uint64_t seed, std::span<const PassageQuery> queries);

/// Recovers T^{A'}_{B',C'} from a recorded projection log. Requires A' <= A
/// and A'-C' >= A-C for the run's projection (A, C).
double recover_passage_time(const TasepRun& run, const PassageQuery& q);

/// Grid of passage times T^A_{B,C} for 1 <= B <= b_max, 1 <= C <= c_max.
class PassageTimeTable {
 public:
  PassageTimeTable(std::int64_t base_color, int b_max, int c_max);
  PassageTimeTable(std::int64_t base_color, int b_max, int c_max, std::vector<double> times);

  std::int64_t base_color() const noexcept { return base_color_; }
  int b_max() const noexcept { return b_max_; }
  int c_max() const noexcept { return c_max_; }

  /// T(b, c); zero when b == 0 or c == 0.
  double at(int b, int c) const;
  void set(int b, int c, double t);
  std::span<const double> values() const noexcept { return times_; }

  /// Strict recursion check: T(B,C) > max(T(B-1,C), T(B,C-1)).
  bool satisfies_recursion() const;

  std::string to_csv() const;

 private:
  std::int64_t base_color_;
  int b_max_;
  int c_max_;
  std::vector<double> times_;
};

/// T^A_{B,C} on [1,b_max] x [1,c_max], computed from the projection (A, c_max).
/// The field window must contain [A - c_max + 1, A + b_max + 1].
PassageTimeTable passage_time_table(ClockField& field, std::int64_t a, int b_max, int c_max);

/// Window used by passage_time_table.
SiteInterval table_window(std::int64_t a, int b_max, int c_max);

/// Height h_{A,B}(t) of the infinite-lattice colored TASEP, computed exactly
/// through a projection large enough to contain every counted particle.
std::int64_t tasep_height(std::uint64_t seed, std::int64_t a, Site b, double t);

}  // namespace swaplab
