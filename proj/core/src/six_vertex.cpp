#include "swaplab/six_vertex.hpp"

#include <cmath>
#include <string>

#include "swaplab/errors.hpp"
#include "swaplab/rng.hpp"

namespace swaplab {

SixVertexSample::SixVertexSample(int x_max, int y_max, SixVertexParams params)
    : x_max_(x_max), y_max_(y_max), params_(params) {
  if (x_max < 1 || y_max < 1) throw ConfigError("six-vertex grid needs positive size");
  if (!(0.0 <= params.b2 && params.b2 < params.b1 && params.b1 < 1.0)) {
    throw ConfigError("six-vertex parameters need 0 <= b2 < b1 < 1");
  }
  const auto n = static_cast<std::size_t>(x_max) * static_cast<std::size_t>(y_max);
  bottom_.assign(n, 0);
  left_.assign(n, 0);
  top_.assign(n, 0);
  right_.assign(n, 0);
}

std::size_t SixVertexSample::index(int x, int y) const {
  if (x < 1 || y < 1 || x > x_max_ || y > y_max_) throw DomainError("vertex outside sample");
  return static_cast<std::size_t>(y - 1) * static_cast<std::size_t>(x_max_) +
         static_cast<std::size_t>(x - 1);
}

int SixVertexSample::horizontal_crossing(int col, int row) const {
  if (col < 0 || col > x_max_ || row < 1 || row > y_max_) throw DomainError("crossing outside sample");
  return col == 0 ? row : right_out(col, row);
}

SixVertexSample sample_six_vertex(std::uint64_t seed, int x_max, int y_max, double b1, double b2) {
  SixVertexSample s(x_max, y_max, {b1, b2});
  CounterRng rng(derive_key(seed, 0x6F));
  for (int d = 2; d <= x_max + y_max; ++d) {
    for (int x = std::max(1, d - y_max); x <= std::min(x_max, d - 1); ++x) {
      const int y = d - x;
      const std::size_t v = s.index(x, y);
      const int i = (y == 1) ? 0 : s.top_[s.index(x, y - 1)];
      const int j = (x == 1) ? y : s.right_[s.index(x - 1, y)];
      s.bottom_[v] = i;
      s.left_[v] = j;
      const double p = (i <= j) ? b1 : b2;
      if (rng.uniform() < p) {
        s.top_[v] = i;
        s.right_[v] = j;
      } else {
        s.top_[v] = j;
        s.right_[v] = i;
      }
    }
  }
  return s;
}

namespace {

int half_integer_floor(double v, const char* what) {
  const double k = v - 0.5;
  if (std::floor(k) != k) throw DomainError(std::string(what) + " must be a half-integer");
  return static_cast<int>(k);
}

}  // namespace

std::int64_t height_6v(const SixVertexSample& sample, int m, double x, double y) {
  const int col = half_integer_floor(x, "x");
  const int top_row = half_integer_floor(y, "y");
  if (col < 0 || col > sample.x_max() || top_row < 0 || top_row > sample.y_max()) {
    throw DomainError("height query outside sample range");
  }
  if (m < 1) throw DomainError("height color threshold must be >= 1");
  std::int64_t h = 0;
  for (int r = 1; r <= top_row; ++r) {
    if (sample.horizontal_crossing(col, r) >= m) ++h;
  }
  return h;
}

}  // namespace swaplab
