#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace swaplab {

/// Trials x dimension matrix of observations, row-major.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  explicit SampleMatrix(std::vector<std::string> labels, std::uint64_t seed = 0);

  std::size_t dim() const noexcept { return labels_.size(); }
  std::size_t trials() const noexcept { return dim() ? data_.size() / dim() : 0; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::uint64_t seed() const noexcept { return seed_; }

  void add_row(std::span<const double> row);
  std::span<const double> row(std::size_t i) const;
  double at(std::size_t i, std::size_t j) const { return data_[i * dim() + j]; }
  std::vector<double> column(std::size_t j) const;
  /// Sub-matrix of the given dimensions.
  SampleMatrix select(std::span<const std::size_t> dims) const;
  std::string to_csv() const;

 private:
  std::vector<std::string> labels_;
  std::uint64_t seed_ = 0;
  std::vector<double> data_;
};

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0; // of the mean
};
Moments moments(std::span<const double> x);

/// Survival function of the Kolmogorov distribution, P[K > lambda].
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (Stephens' small-sample adjustment of the effective size).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf);

struct EnergyResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int permutations = 0;
  std::size_t n_a = 0;  // sizes actually used
  std::size_t n_b = 0;
  bool subsampled = false;
};

/// Per-group cap on the sample size entering the O(n^2) energy statistic.
inline constexpr std::size_t kEnergyDefaultCap = 1000;

/// Energy-distance two-sample test with label-permutation p-value
/// (1 + #{T_perm >= T_obs}) / (permutations + 1). Coordinates are scaled by the
/// pooled standard deviation of each dimension. Groups larger than `max_per_group`
/// are thinned to a seeded random subset.
EnergyResult energy_permutation_test(const SampleMatrix& a, const SampleMatrix& b,
                                     int permutations = 2000, std::uint64_t seed = 0,
                                     std::size_t max_per_group = kEnergyDefaultCap);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int cells_used = 0;
};

/// Homogeneity test on a 2 x K contingency table. Cells whose pooled count is
/// below `min_pooled` are merged into one cell.
ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> counts_a,
                                      std::span<const std::uint64_t> counts_b,
                                      std::uint64_t min_pooled = 10);

/// Same test for categorical samples given as labels.
ChiSquareResult chi_square_categorical(std::span<const std::string> a,
                                       std::span<const std::string> b,
                                       std::uint64_t min_pooled = 10);

/// Holm step-down adjusted p-values (same order as input).
std::vector<double> holm_adjust(std::span<const double> p);

/// Two-sided exponential increment law of the local OSP / LPP fluctuations:
/// density c e^{-r t} for t >= 0 and c e^{l t} for t < 0 with
/// c = sqrt(y(1-y)) / (1 + 2 sqrt(y(1-y))), r = sqrt(y)/s, l = sqrt(1-y)/s,
/// s = sqrt(y) + sqrt(1-y).
struct IncrementLaw {
  double y = 0.5;

  explicit IncrementLaw(double y_);

  double prefactor() const;
  double right_rate() const;
  double left_rate() const;
  double right_mass() const { return prefactor() / right_rate(); }
  double left_mass() const { return prefactor() / left_rate(); }
  double density(double t) const;
  double cdf(double t) const;
  double mean() const;
  double variance() const;
};

std::vector<double> sample_increment_law(const IncrementLaw& law, std::size_t n, std::uint64_t seed);

// ------------------------------------------------------------------ reports

struct MarginalTest {
  std::string label;
  KsResult ks;
  Moments a;
  Moments b;
  double holm_p = 1.0;
};

struct NamedChiSquare {
  std::string label;
  ChiSquareResult result;
};

/// A scalar check against an oracle: |value - expected| <= tolerance.
struct ScalarCheck {
  std::string label;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Outcome of one equality-in-distribution test or verification step.
struct TestReport {
  std::string name;
  /// "equal" decisions pass when p > alpha; "differ" (negative controls) when p < alpha.
  bool expect_equal = true;
  double alpha = 1e-3;
  std::vector<MarginalTest> marginals;
  std::optional<EnergyResult> energy;
  std::vector<NamedChiSquare> chi_square;
  std::vector<ScalarCheck> checks;
  std::vector<std::string> notes;
  bool pass = false;

  /// Recomputes Holm adjustments and `pass` from the components.
  void decide();
  std::string to_json() const;
};

/// Fills per-marginal KS tests and moments for two samples with equal labels.
std::vector<MarginalTest> marginal_tests(const SampleMatrix& a, const SampleMatrix& b);

ScalarCheck scalar_check(std::string label, double value, double expected, double tolerance);

}  // namespace swaplab
