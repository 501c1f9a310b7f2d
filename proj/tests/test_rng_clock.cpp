#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "swaplab/clock_field.hpp"
#include "swaplab/errors.hpp"
#include "swaplab/rng.hpp"
#include "swaplab/stats.hpp"

using namespace swaplab;

TEST_CASE("counter rng is a pure function of key and counter") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  CounterRng c(42, 50);
  CHECK(c() == CounterRng::at(42, 50));
  CHECK(CounterRng::at(42, 0) != CounterRng::at(43, 0));
}

TEST_CASE("derived keys separate streams") {
  std::set<std::uint64_t> keys;
  for (std::uint64_t a = 0; a < 50; ++a)
    for (std::uint64_t b = 0; b < 50; ++b) keys.insert(derive_key(7, a, b));
  CHECK(keys.size() == 2500);
  CHECK(derive_key(7, 1, 2) != derive_key(7, 2, 1));
}

TEST_CASE("uniform and exponential variates have the right moments") {
  CounterRng rng(derive_key(1, 2));
  std::vector<double> u, e;
  for (int i = 0; i < 200000; ++i) {
    const double x = rng.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
    u.push_back(x);
    e.push_back(rng.exponential());
  }
  const Moments mu = moments(u), me = moments(e);
  CHECK(std::abs(mu.mean - 0.5) < 4 * mu.std_error);
  CHECK(std::abs(me.mean - 1.0) < 4 * me.std_error);
  CHECK(me.variance == doctest::Approx(1.0).epsilon(0.02));
  const KsResult ks = ks_one_sample(e, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); });
  CHECK(ks.p_value > 1e-3);
}

TEST_CASE("below stays in range") {
  CounterRng rng(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++hits[v];
  }
  for (int h : hits) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("clock field rings are increasing and order independent") {
  ClockField f(9, {0, 10});
  ClockField g(9, {0, 10});
  // read g in reverse edge order and deep first
  for (Site e = 9; e >= 0; --e) g.ring(e, 30);
  for (Site e = 0; e < 10; ++e) {
    double prev = 0.0;
    for (std::size_t k = 0; k <= 30; ++k) {
      const double t = f.ring(e, k);
      CHECK(t > prev);
      CHECK(t == g.ring(e, k));
      prev = t;
    }
  }
}

TEST_CASE("next_ring returns the first ring strictly after the query") {
  ClockField f(3, {1, 4});
  const double r0 = f.ring(2, 0), r1 = f.ring(2, 1), r2 = f.ring(2, 2);
  CHECK(f.next_ring(2, 0.0) == r0);
  CHECK(f.next_ring(2, r0) == r1);
  CHECK(f.next_ring(2, (r1 + r2) / 2) == r2);
  // going backwards is allowed
  CHECK(f.next_ring(2, 0.0) == r0);
}

TEST_CASE("a field's clocks depend on the edge, not on the window") {
  ClockField small(11, {2, 5});
  ClockField big(11, {-20, 40});
  for (Site e = 2; e < 5; ++e)
    for (std::size_t k = 0; k < 5; ++k) CHECK(small.ring(e, k) == big.ring(e, k));
}

TEST_CASE("ring gaps are Exp(1)") {
  ClockField f(17, {0, 1});
  std::vector<double> gaps;
  double prev = 0.0;
  for (std::size_t k = 0; k < 50000; ++k) {
    const double t = f.ring(0, k);
    gaps.push_back(t - prev);
    prev = t;
  }
  const KsResult ks = ks_one_sample(gaps, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); });
  CHECK(ks.p_value > 1e-3);
}

TEST_CASE("edges outside the window are rejected") {
  ClockField f(1, {0, 3});
  CHECK_THROWS_AS(f.ring(3, 0), DomainError);
  CHECK_THROWS_AS(f.ring(-1, 0), DomainError);
}
