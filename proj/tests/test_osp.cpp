#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "swaplab/errors.hpp"
#include "swaplab/osp.hpp"
#include "swaplab/stats.hpp"

using namespace swaplab;

namespace {

// Scans every edge's next ring; swaps on a ring when the values are in increasing order.
std::vector<double> naive_finishing(ClockField& f, int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  std::vector<double> last(static_cast<std::size_t>(n - 1), 0.0);
  double now = 0.0;
  int swaps = 0;
  while (swaps < n * (n - 1) / 2) {
    double best = std::numeric_limits<double>::infinity();
    int edge = 0;
    for (int e = 1; e < n; ++e) {
      const double r = f.next_ring(e, now);
      if (r < best) {
        best = r;
        edge = e;
      }
    }
    now = best;
    auto& l = v[static_cast<std::size_t>(edge - 1)];
    auto& r = v[static_cast<std::size_t>(edge)];
    if (l < r) {
      std::swap(l, r);
      last[static_cast<std::size_t>(edge - 1)] = now;
      ++swaps;
    }
  }
  return last;
}

}  // namespace

TEST_CASE("OSP reaches the reversal through a sorting network") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    ClockField f(derive_key(1, s), {1, 7});
    const OspTrajectory t = simulate_osp(f, 7);
    CHECK(t.events.size() == 21);
    CHECK(is_sorting_network(t));
    const std::vector<int> rev{7, 6, 5, 4, 3, 2, 1};
    CHECK(t.final_values == rev);
    CHECK(t.absorbing_time == *std::max_element(t.finishing.begin(), t.finishing.end()));
    CHECK(t.finishing_time(t.last_swap_location) == t.absorbing_time);
    CHECK(t.finishing_time(0) == 0.0);
    CHECK(t.finishing_time(7) == 0.0);
  }
}

TEST_CASE("finishing times match a brute-force OSP on the same clocks") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    ClockField f(derive_key(2, s), {1, 6}), g(derive_key(2, s), {1, 6});
    const OspTrajectory t = simulate_osp(f, 6, false);
    CHECK(t.events.empty());
    CHECK(finishing_vector(t) == naive_finishing(g, 6));
  }
}

TEST_CASE("tampered logs are not sorting networks") {
  ClockField f(3, {1, 4});
  OspTrajectory t = simulate_osp(f, 4);
  REQUIRE(is_sorting_network(t));
  OspTrajectory dup = t;
  dup.events.push_back({t.events.back().time + 1.0, 1});
  CHECK_FALSE(is_sorting_network(dup));
  OspTrajectory cut = t;
  cut.events.pop_back();
  CHECK_FALSE(is_sorting_network(cut));
}

TEST_CASE("N = 2: one swap at an Exp(1) time, LAL(2,2) always holds") {
  std::vector<double> u;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    ClockField f(derive_key(4, s), {1, 2});
    const OspTrajectory t = simulate_osp(f, 2, false);
    u.push_back(t.finishing_time(1));
    REQUIRE(lal_indicator(t, 2));
    REQUIRE_FALSE(lal_indicator(t, 1));
  }
  CHECK(ks_one_sample(u, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); }).p_value > 1e-3);
}

TEST_CASE("cut-off and push-back") {
  const FiniteConfig c = FiniteConfig::from_sites({7, 1, 5});
  CHECK(c.particles == std::vector<Site>{1, 5, 7});
  CHECK(cutoff(c, 2).particles == std::vector<Site>{5, 7});
  CHECK(cutoff(c, 5) == c);
  CHECK(pushback(c, 6).particles == std::vector<Site>{1, 5, 6});
  CHECK(pushback(c, 3).particles == std::vector<Site>{1, 2, 3});
  CHECK(pushback(FiniteConfig::from_sites({-4, 0}), 3).particles == std::vector<Site>{-4, 0});
  CHECK_THROWS_AS(FiniteConfig::from_sites({2, 2}), ConfigError);
}

TEST_CASE("push-back of the cut-off TASEP equals the finite TASEP on shared clocks") {
  for (std::uint64_t s = 0; s < 40; ++s)
    for (int a = 1; a < 6; ++a) {
      ClockField f(derive_key(5, s, a), {1, 12});
      CHECK(check_cbopera(f, 6, a, std::numeric_limits<double>::infinity()));
    }
}

TEST_CASE("negative control: decoupled clocks break the identity") {
  int broken = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    ClockField f(derive_key(6, s), {1, 12}), g(derive_key(7, s), {1, 12});
    broken += !check_cbopera(f, g, 6, 3, std::numeric_limits<double>::infinity());
  }
  CHECK(broken >= 18);
}

TEST_CASE("OSP argument checks") {
  ClockField f(1, {1, 3});
  CHECK_THROWS_AS(simulate_osp(f, 1), DomainError);
  CHECK_THROWS_AS(check_cbopera(f, 3, 0, 1.0), DomainError);
  const OspTrajectory t = simulate_osp(f, 3);
  CHECK_THROWS_AS(t.finishing_time(4), DomainError);
}
