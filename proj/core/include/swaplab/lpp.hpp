#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swaplab/tasep.hpp"

namespace swaplab {

/// Lattice point (B, C) of the positive quadrant, 1-based.
struct LatticePoint {
  int b = 1;
  int c = 1;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  /// Coordinate-wise order.
  bool leq(const LatticePoint& o) const noexcept { return b <= o.b && c <= o.c; }
};

enum class FieldProvenance { Sampled, ExtractedFromTasep, ShiftCoupled, Given };

/// Dense row-major grid of nonnegative vertex weights on [1,b_max] x [1,c_max].
class LppField {
 public:
  static constexpr int kMaxDim = 2000;

  LppField(int b_max, int c_max, std::vector<double> weights,
           FieldProvenance provenance = FieldProvenance::Given, std::int64_t base_color = 0);

  int b_max() const noexcept { return b_max_; }
  int c_max() const noexcept { return c_max_; }
  FieldProvenance provenance() const noexcept { return provenance_; }
  /// Color A of the TASEP the weights came from (meaningful unless Sampled/Given).
  std::int64_t base_color() const noexcept { return base_color_; }

  double operator()(int b, int c) const;
  bool contains(LatticePoint p) const noexcept {
    return p.b >= 1 && p.c >= 1 && p.b <= b_max_ && p.c <= c_max_;
  }
  std::span<const double> weights() const noexcept { return weights_; }

  std::string to_csv() const;

 private:
  int b_max_;
  int c_max_;
  std::vector<double> weights_;
  FieldProvenance provenance_;
  std::int64_t base_color_;
};

/// I.i.d. Exp(1) weights, reproducible from the seed.
LppField sample_field(std::uint64_t seed, int b_max, int c_max);

/// Last-passage time L_{u,v}: maximal weight of an up-right path from u to v.
double passage_time(const LppField& field, LatticePoint u, LatticePoint v);

/// All passage times L_{u,w} for u <= w <= v as a (v.b-u.b+1) x (v.c-u.c+1)
/// row-major grid.
std::vector<double> passage_grid(const LppField& field, LatticePoint u, LatticePoint v);

/// Passage times from (1,1) to every vertex, as a table with T(0,.) = T(.,0) = 0.
PassageTimeTable passage_table(const LppField& field, std::int64_t base_color = 0);

/// Maximizing up-right path.
struct Geodesic {
  LatticePoint from;
  LatticePoint to;
  std::vector<LatticePoint> path;

  std::string to_csv() const;
};

/// Backtracks from v through the predecessor with the larger passage time.
/// Throws TieError when two predecessors carry exactly equal passage times.
Geodesic geodesic(const LppField& field, LatticePoint u, LatticePoint v);

/// Weights omega^A(B,C) = T(B,C) - max(T(B-1,C), T(B,C-1)) recovered from a
/// passage-time table. Throws InvariantError if the table is not monotone.
LppField extract_weight_field(const PassageTimeTable& table);

/// Replays extraction and the passage recursion in exact rational arithmetic
/// (every double is a dyadic rational) and reports whether the table comes back
/// unchanged. The double route can differ by rounding since (T - m) + m != T.
bool extraction_roundtrip_exact(const PassageTimeTable& table);

/// Largest |T - T'| / T over the table, where T' is recomputed in doubles.
double extraction_roundtrip_error(const PassageTimeTable& table);

/// Result of one step of the shift coupling omega^A -> omega^{A+1}.
struct ShiftCouplingState {
  /// pi(0..b_out); pi(0) = 1. Entries past `escaped_at` are unresolved and
  /// exceed every column of the input grid.
  std::vector<int> pi;
  /// J_0..J_{b_out}; J_0 = 0.
  std::vector<double> jump_times;
  /// First index i whose pi(i) search ran past the input grid, if any.
  std::optional<int> escaped_at;
  /// Passage times L^{A+1}_{(1,1),(B,C)} on the output grid.
  PassageTimeTable next_table{0, 1, 1};
  /// omega^{A+1} on the output grid.
  std::optional<LppField> next_field;
};

/// Builds the coupled field for color A+1 from the field for color A and a
/// fresh Exp(1) stream E_{i,j} (read from CounterRng::at(fresh_key, .)).
/// The output covers [1, b_max-1] x [1, c_max-1] of the input.
ShiftCouplingState shift_couple(const LppField& field, std::uint64_t fresh_key);

/// Same, with an explicit output size (each no larger than the default).
ShiftCouplingState shift_couple(const LppField& field, std::uint64_t fresh_key, int b_out, int c_out);

}  // namespace swaplab
