#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "swaplab/errors.hpp"
#include "swaplab/rng.hpp"
#include "swaplab/stats.hpp"
#include "swaplab/suites.hpp"

using namespace swaplab;
using boost::math::quadrature::gauss_kronrod;

namespace {

double integrate(const std::function<double(double)>& f, double a, double b) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-12);
}

SampleMatrix normal_sample(std::uint64_t key, std::size_t n, std::size_t d, double shift) {
  SampleMatrix m(std::vector<std::string>(d, "x"));
  CounterRng rng(key);
  std::vector<double> row(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) row[k] = rng.normal() + (k == 0 ? shift : 0.0);
    m.add_row(row);
  }
  return m;
}

}  // namespace

TEST_CASE("moments") {
  const std::vector<double> x{1, 2, 3, 4};
  const Moments m = moments(x);
  CHECK(m.mean == 2.5);
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("Kolmogorov survival function at tabulated points") {
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.963945).epsilon(1e-5));
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.269999).epsilon(1e-5));
  CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.049444).epsilon(1e-4));
  CHECK(kolmogorov_sf(1.95) == doctest::Approx(0.001).epsilon(0.02));
}

TEST_CASE("two-sample KS statistic") {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6}, c{1, 2, 3};
  CHECK(ks_two_sample(a, b).statistic == 1.0);
  CHECK(ks_two_sample(a, c).statistic == 0.0);
  CHECK(ks_two_sample(a, c).p_value == 1.0);
  const std::vector<double> d{1, 1, 2, 2}, e{1, 2, 2, 2};
  CHECK(ks_two_sample(d, e).statistic == doctest::Approx(0.25));
}

TEST_CASE("chi-square homogeneity on a 2x2 table") {
  const std::uint64_t a[] = {10, 20}, b[] = {20, 10};
  const ChiSquareResult r = chi_square_two_sample(a, b);
  CHECK(r.statistic == doctest::Approx(20.0 / 3.0));
  CHECK(r.dof == 1);
  CHECK(r.p_value == doctest::Approx(0.0098232).epsilon(1e-4));
  // sparse cells are merged
  const std::uint64_t c[] = {50, 50, 1, 2}, d[] = {50, 50, 2, 1};
  CHECK(chi_square_two_sample(c, d).cells_used == 3);
  const std::vector<std::string> s1{"a", "b", "a"}, s2{"a", "b", "b"};
  CHECK(chi_square_categorical(s1, s2, 0).cells_used == 2);
}

TEST_CASE("Holm adjustment") {
  const std::vector<double> p{0.01, 0.04, 0.03};
  const auto h = holm_adjust(p);
  CHECK(h[0] == doctest::Approx(0.03));
  CHECK(h[1] == doctest::Approx(0.06));
  CHECK(h[2] == doctest::Approx(0.06));
  const std::vector<double> big{0.6, 0.9};
  CHECK(holm_adjust(big)[1] == 1.0);
}

TEST_CASE("increment law is a probability density with variance 8 at y = 1/2") {
  for (double y : {0.5, 0.8, 0.2}) {
    const IncrementLaw law(y);
    auto f = [&](double t) { return law.density(t); };
    const double mass = integrate(f, -200.0, 0.0) + integrate(f, 0.0, 200.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(law.left_mass() + law.right_mass() == doctest::Approx(1.0).epsilon(1e-12));
    auto tf = [&](double t) { return t * law.density(t); };
    auto t2f = [&](double t) { return t * t * law.density(t); };
    const double mean = integrate(tf, -400.0, 0.0) + integrate(tf, 0.0, 400.0);
    const double second = integrate(t2f, -400.0, 0.0) + integrate(t2f, 0.0, 400.0);
    CHECK(law.mean() == doctest::Approx(mean).epsilon(1e-8));
    CHECK(law.variance() == doctest::Approx(second - mean * mean).epsilon(1e-8));
    CHECK(law.cdf(1.3) == doctest::Approx(integrate(f, -200.0, 0.0) + integrate(f, 0.0, 1.3)).epsilon(1e-9));
    const auto xs = sample_increment_law(law, 50000, 4);
    CHECK(ks_one_sample(xs, [&](double t) { return law.cdf(t); }).p_value > 1e-3);
  }
  CHECK(IncrementLaw(0.5).variance() == doctest::Approx(8.0));
  CHECK_THROWS_AS(IncrementLaw(1.0), ConfigError);
}

TEST_CASE("energy test detects a shift and accepts equal laws") {
  const SampleMatrix a = normal_sample(1, 400, 3, 0.0);
  const SampleMatrix b = normal_sample(2, 400, 3, 0.0);
  const SampleMatrix c = normal_sample(3, 400, 3, 0.5);
  const EnergyResult same = energy_permutation_test(a, b, 500, 7);
  const EnergyResult diff = energy_permutation_test(a, c, 500, 7);
  CHECK(same.p_value > 1e-3);
  CHECK(diff.p_value < 1e-2);
  CHECK(diff.p_value == doctest::Approx(1.0 / 501.0));
  const EnergyResult capped = energy_permutation_test(a, c, 200, 7, 100);
  CHECK(capped.subsampled);
  CHECK(capped.n_a == 100);
  // reproducible
  CHECK(energy_permutation_test(a, b, 200, 9).statistic == energy_permutation_test(a, b, 200, 9).statistic);
  CHECK(energy_permutation_test(a, b, 200, 9).p_value == energy_permutation_test(a, b, 200, 9).p_value);
}

TEST_CASE("null calibration of the two-sample KS test") {
  int rejections = 0;
  for (int rep = 0; rep < 200; ++rep) {
    CounterRng r(derive_key(55, rep));
    std::vector<double> a(300), b(300);
    for (auto& v : a) v = r.exponential();
    for (auto& v : b) v = r.exponential();
    rejections += ks_two_sample(a, b).p_value < 0.05;
  }
  CHECK(rejections >= 2);
  CHECK(rejections <= 24);
}

TEST_CASE("report decisions") {
  TestReport r;
  r.marginals.push_back({"x", {0.1, 0.5, 10, 10}, {}, {}, 1.0});
  r.decide();
  CHECK(r.pass);
  r.checks.push_back(scalar_check("c", 1.0, 2.0, 0.5));
  r.decide();
  CHECK_FALSE(r.pass);
  TestReport neg;
  neg.expect_equal = false;
  neg.chi_square.push_back({"binned", {50.0, 4, 1e-9, 5}});
  neg.decide();
  CHECK(neg.pass);
  neg.chi_square[0].result.p_value = 0.2;
  neg.decide();
  CHECK_FALSE(neg.pass);
  CHECK(neg.to_json().find("\"expect\": \"differ\"") != std::string::npos);
}

TEST_CASE("closed-form pair density has the right marginals") {
  // T^0_{3,1} ~ Gamma(3), T^0_{1,2} ~ Gamma(2)
  for (double t1 : {0.3, 1.0, 2.5, 4.0}) {
    auto f = [&](double t2) { return density_pair_unshifted(t1, t2); };
    const double m = integrate(f, 0.0, t1) + integrate(f, t1, 80.0);
    CHECK(m == doctest::Approx(t1 * t1 * std::exp(-t1) / 2).epsilon(1e-8));
  }
  for (double t2 : {0.3, 1.0, 2.5}) {
    auto f = [&](double t1) { return density_pair_unshifted(t1, t2); };
    const double m = integrate(f, 0.0, t2) + integrate(f, t2, 80.0);
    CHECK(m == doctest::Approx(t2 * std::exp(-t2)).epsilon(1e-8));
  }
  CHECK(density_pair_mass(0.0, INFINITY, 0.0, INFINITY) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("shift-2 density integrates to one and differs only on t1 > t2") {
  double total = 0.0;
  auto outer = [&](double t1) {
    auto f = [&](double t2) { return density_pair_shift2(t1, t2); };
    return integrate(f, 0.0, t1) + integrate(f, t1, 80.0);
  };
  total = integrate(outer, 0.0, 80.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(density_pair_shift2(0.5, 1.5) == density_pair_unshifted(0.5, 1.5));
  CHECK(density_pair_shift2(2.0, 0.5) != doctest::Approx(density_pair_unshifted(2.0, 0.5)));
  // mass of {t1 > t2} agrees under both laws
  auto upper = [&](auto dens) {
    auto o = [&](double t1) {
      auto f = [&](double t2) { return dens(t1, t2); };
      return integrate(f, 0.0, t1);
    };
    return integrate(o, 0.0, 80.0);
  };
  CHECK(upper(density_pair_shift2) == doctest::Approx(upper(density_pair_unshifted)).epsilon(1e-8));
}
