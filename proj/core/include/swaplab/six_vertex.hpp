#pragma once

#include <cstdint>
#include <vector>

namespace swaplab {

struct SixVertexParams {
  double b1 = 0.5;
  double b2 = 0.0;
};

/// One sample of the colored stochastic six-vertex model on [1,x_max] x [1,y_max].
/// Row y enters from the left carrying color y; bottom edges carry color 0.
class SixVertexSample {
 public:
  SixVertexSample(int x_max, int y_max, SixVertexParams params);

  int x_max() const noexcept { return x_max_; }
  int y_max() const noexcept { return y_max_; }
  const SixVertexParams& params() const noexcept { return params_; }

  int bottom_in(int x, int y) const { return bottom_[index(x, y)]; }
  int left_in(int x, int y) const { return left_[index(x, y)]; }
  int top_out(int x, int y) const { return top_[index(x, y)]; }
  int right_out(int x, int y) const { return right_[index(x, y)]; }

  /// Color on the horizontal edge crossing the vertical line x = col + 1/2 in
  /// row `row` (col = 0 is the left boundary).
  int horizontal_crossing(int col, int row) const;

 private:
  friend SixVertexSample sample_six_vertex(std::uint64_t, int, int, double, double);
  std::size_t index(int x, int y) const;

  int x_max_;
  int y_max_;
  SixVertexParams params_;
  std::vector<int> bottom_, left_, top_, right_;
};

/// Resolves vertices along anti-diagonals. With bottom color i and left color j:
/// if i <= j, top <- i and right <- j with probability b1, otherwise swapped;
/// if i > j the same with b2. Requires 0 <= b2 < b1 < 1.
SixVertexSample sample_six_vertex(std::uint64_t seed, int x_max, int y_max, double b1, double b2);

/// H^m(x, y): number of paths of color >= m crossing the vertical line through
/// the half-integer x strictly below the half-integer y.
std::int64_t height_6v(const SixVertexSample& sample, int m, double x, double y);

}  // namespace swaplab
