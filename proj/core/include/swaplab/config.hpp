#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "swaplab/tasep.hpp"

namespace swaplab {

/// Options shared by every suite.
struct RunOptions {
  std::uint64_t seed = 1;
  std::int64_t trials = 0;   // 0: suite default
  int threads = 1;
  int permutations = 2000;
  std::size_t energy_cap = 1000;
  int repetitions = 1;       // independent seeded repetitions of each test
  double alpha = 1e-3;
};

/// Shifts the groups i > iota by `shift` in A.
struct ShiftDeConfig {
  std::vector<std::vector<RectangleSpec>> groups;
  int iota = 1;
  int shift = 1;
  /// The shifted configuration violates the ordering hypothesis on purpose.
  bool negative_control = false;
  /// Optional event thresholds t_i: compares P[max_j T_{i,j} <= t_i for all i].
  std::vector<double> event_times;
  /// Negative controls: restrict the comparison to the region t_1 > t_2.
  bool region_first_greater = false;
  /// Histogram check of (T^0_{3,1}, T^0_{1,2}) against its closed-form density.
  std::int64_t density_trials = 0;
};

struct ShiftSaConfig {
  std::vector<RectangleSpec> rects;       // (A_i, B_i, C_i)
  std::vector<std::int64_t> shifted_a;    // A'_i
  bool geodesic = false;
};

struct OspLppConfig {
  int n = 6;
};

struct AsymptoticsConfig {
  int lal_n = 200;
  std::vector<double> lal_y{0.5, 0.8};
  std::int64_t lal_trials = 5000;
  double lal_tolerance = 0.05;

  int increment_n = 500;
  double increment_y = 0.5;
  int increment_halfwidth = 10;
  std::int64_t increments = 100000;
  double variance_tolerance = 0.3;

  int max_n = 300;
  double max_tolerance = 0.10;  // relative
  std::vector<int> location_n{100, 200, 400};
  std::int64_t scaling_trials = 1000;
  double band_lo = 0.15;
  double band_hi = 1.0;
  double max_growth = 1.5;  // largest-N over smallest-N spread ratio

  bool run_lal = true;
  bool run_increments = true;
  bool run_scaling = true;
};

struct HeightPoint {
  double x = 0.5;
  double y = 0.5;
  int m = 1;
};

struct GalInstance {
  std::string name;
  std::vector<HeightPoint> lower;  // (x_i, y_i, m_i), shifted
  std::vector<HeightPoint> upper;  // (x'_i, y'_i, m'_i), fixed
};

struct LimitSmokeConfig {
  std::int64_t a = 1;
  std::int64_t b = 1;
  double t = 2.0;
  std::vector<double> eps{0.05, 0.02};
  std::int64_t trials = 200000;
  /// TASEP reference sample, shared by every eps.
  std::int64_t reference_trials = 1000000;
};

struct SixVertexConfig {
  double b1 = 0.6;
  double b2 = 0.3;
  std::vector<GalInstance> instances;
  std::optional<LimitSmokeConfig> limit;
};

struct FgConfig {
  std::vector<int> ns{2, 3, 4, 5};
  int points = 20;
  int eg_max_n = 5;
  bool witness = true;
};

struct CouplingConfig {
  int n = 8;
  std::int64_t seeds = 100;
  int table_b = 6;
  int table_c = 6;
  std::int64_t table_a = 0;
  double horizon = std::numeric_limits<double>::infinity();
};

using SuiteParams = std::variant<ShiftDeConfig, ShiftSaConfig, OspLppConfig, AsymptoticsConfig,
                                 SixVertexConfig, FgConfig, CouplingConfig>;

struct ExperimentConfig {
  std::string suite;
  RunOptions run;
  SuiteParams params;
  std::string out;
  std::string format = "json";
};

/// Suite names accepted by `verify`.
const std::vector<std::string>& suite_names();

/// Parses a JSON document; `suite_hint` selects the suite when the document has none.
/// Throws ConfigError on malformed input or violated hypotheses.
ExperimentConfig parse_config(const std::string& json_text, const std::string& suite_hint = "");
ExperimentConfig load_config(const std::string& path, const std::string& suite_hint = "");
/// Default configuration for a suite.
ExperimentConfig default_config(const std::string& suite);

/// Hypothesis checks; return an empty string when satisfied, else the violated inequality.
std::string check_shift_de(const ShiftDeConfig& c);
std::string check_gal_instance(const GalInstance& g);
std::string check_shift_sa(const ShiftSaConfig& c);

/// Applies the shift to the groups i > iota.
std::vector<std::vector<RectangleSpec>> shifted_groups(const ShiftDeConfig& c);

}  // namespace swaplab
