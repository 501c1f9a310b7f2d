#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "swaplab/errors.hpp"
#include "swaplab/lpp.hpp"
#include "swaplab/stats.hpp"
#include "swaplab/tasep.hpp"

using namespace swaplab;

namespace {

// Brute force: every edge rings on its own clock, a ring swaps iff the edge is an ascent.
std::vector<SwapEvent> naive_run(ClockField& f, SiteInterval w, std::vector<Color> colors, double horizon) {
  std::vector<SwapEvent> out;
  double now = 0.0;
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    Site edge = 0;
    bool any_ascent = false;
    for (Site e = w.lo; e < w.hi; ++e) {
      const auto i = static_cast<std::size_t>(e - w.lo);
      if (colors[i] < colors[i + 1]) any_ascent = true;
      const double r = f.next_ring(e, now);
      if (r < best) {
        best = r;
        edge = e;
      }
    }
    if (!any_ascent || best > horizon) break;
    now = best;
    const auto i = static_cast<std::size_t>(edge - w.lo);
    if (colors[i] < colors[i + 1]) {
      out.push_back({now, edge, colors[i], colors[i + 1]});
      std::swap(colors[i], colors[i + 1]);
    }
  }
  return out;
}

double exp_cdf(double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); }

}  // namespace

TEST_CASE("identity state and height function") {
  const ColoredTasepState s = identity_state({-2, 3});
  CHECK(s.color_at(-2) == -2);
  CHECK(s.color_at(3) == 3);
  CHECK(height_function(s, 0, -2) == 3);
  CHECK(height_function(s, 0, 1) == 0);
  CHECK(height_function(s, 3, 1) == 3);
  CHECK_THROWS_AS(height_function(s, 0, 4), DomainError);
}

TEST_CASE("rectangle order") {
  CHECK(rectangle_leq({0, 3, 1}, {0, 1, 3}));
  CHECK(rectangle_leq({0, 3, 1}, {1, 1, 3}));
  CHECK_FALSE(rectangle_leq({0, 3, 1}, {2, 1, 2}));
  CHECK_FALSE(rectangle_leq({1, 1, 1}, {0, 1, 1}));
  CHECK(rectangle_leq({2, 2, 2}, {2, 2, 2}));
}

TEST_CASE("event-driven run matches a brute-force scan of all clocks") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SiteInterval w{-4, 6};
    std::vector<Color> init;
    for (Site x = w.lo; x <= w.hi; ++x) init.push_back(x <= 1 ? x : kHole);
    ClockField f(seed, w), g(seed, w);
    ColoredExclusion sim(f, w, init);
    std::vector<SwapEvent> fast;
    sim.run(5.0, [&](const SwapEvent& e) {
      fast.push_back(e);
      return true;
    });
    const auto slow = naive_run(g, w, init, 5.0);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(fast[i].time == slow[i].time);
      CHECK(fast[i].site == slow[i].site);
      CHECK(fast[i].stronger == slow[i].stronger);
      CHECK(fast[i].weaker == slow[i].weaker);
    }
  }
}

TEST_CASE("a frozen window stops") {
  ClockField f(1, {1, 4});
  ColoredExclusion sim(f, {1, 4}, {4, 3, 2, 1});
  CHECK(std::isinf(sim.next_event_time()));
  CHECK(sim.run(100.0) == 0);
  CHECK_THROWS_AS(sim.step(), InvariantError);
}

TEST_CASE("covering projection and window") {
  const PassageQuery q[] = {{0, 3, 1}, {1, 1, 3}, {2, 2, 2}};
  const ProjectionSpec p = covering_projection(q);
  CHECK(p.base_color == 2);
  CHECK(p.particle_count == 4);  // A* - min(A - C) = 2 - (-2)
  const SiteInterval w = covering_window(q);
  CHECK(w.lo == -1);
  CHECK(w.hi == 5);
  CHECK_THROWS_AS(covering_projection(std::span<const PassageQuery>{}), ConfigError);
}

TEST_CASE("T^0_{1,1} and T^0_{B,1} have Gamma laws") {
  std::vector<double> t11, t41;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    const PassageQuery q[] = {{0, 1, 1}, {0, 4, 1}};
    const auto t = sample_passage_times(derive_key(5, s), q);
    t11.push_back(t[0]);
    t41.push_back(t[1]);
  }
  CHECK(ks_one_sample(t11, exp_cdf).p_value > 1e-3);
  // Gamma(4, 1) cdf
  auto gamma4 = [](double x) {
    if (x <= 0) return 0.0;
    return 1.0 - std::exp(-x) * (1 + x + x * x / 2 + x * x * x / 6);
  };
  CHECK(ks_one_sample(t41, gamma4).p_value > 1e-3);
}

TEST_CASE("passage tables satisfy the LPP recursion with Exp(1) increments") {
  std::vector<double> w;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    ClockField f(derive_key(8, s), table_window(1, 4, 3));
    const PassageTimeTable t = passage_time_table(f, 1, 4, 3);
    REQUIRE(t.satisfies_recursion());
    const LppField ex = extract_weight_field(t);
    CHECK(ex.provenance() == FieldProvenance::ExtractedFromTasep);
    if (s < 1000)
      for (double x : ex.weights()) w.push_back(x);
    else
      w.push_back(ex(4, 3));
  }
  CHECK(ks_one_sample(w, exp_cdf).p_value > 1e-3);
}

TEST_CASE("recorded logs reproduce passage times") {
  ClockField f(77, {-5, 12});
  TasepRun run = simulate_finite_colored(f, {2, 6}, std::numeric_limits<double>::infinity());
  ClockField g(77, {-5, 12});
  const PassageQuery qs[] = {{2, 3, 2}, {1, 2, 4}, {0, 5, 1}, {2, 1, 6}};
  const auto direct = passage_times(g, qs);
  for (std::size_t i = 0; i < 4; ++i) CHECK(recover_passage_time(run, qs[i]) == direct[i]);
  CHECK_THROWS_AS(recover_passage_time(run, {3, 1, 1}), DomainError);
}

TEST_CASE("height function agrees with passage times pathwise") {
  // h_{a,b}(t) >= C iff T^a_{b-a-1+C, C} <= t, on the same clocks.
  const std::int64_t a = 1;
  const Site b = 2;
  const double t = 2.5;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::uint64_t seed = derive_key(31, s);
    const std::int64_t h = tasep_height(seed, a, b, t);
    std::vector<PassageQuery> qs;
    for (std::int64_t c = 1; c <= h + 1; ++c) qs.push_back({a, b - a - 1 + c, c});
    const auto times = sample_passage_times(seed, qs);
    for (std::int64_t c = 1; c <= h; ++c) CHECK(times[static_cast<std::size_t>(c - 1)] <= t);
    CHECK(times[static_cast<std::size_t>(h)] > t);
  }
}

TEST_CASE("passage queries outside the projection are rejected") {
  ClockField f(1, {-3, 6});
  const PassageQuery bad[] = {{0, 0, 1}};
  CHECK_THROWS_AS(passage_times(f, bad), DomainError);
  const PassageQuery wide[] = {{0, 2, 9}};
  CHECK_THROWS_AS(passage_times(f, wide), ConfigError);
}
