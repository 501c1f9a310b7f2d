#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "swaplab/config.hpp"
#include "swaplab/stats.hpp"

namespace swaplab {

/// Everything a verification suite produced.
struct SuiteResult {
  std::string suite;
  std::vector<TestReport> reports;
  /// Raw samples, by name, for optional CSV dumps.
  std::vector<std::pair<std::string, SampleMatrix>> samples;
  /// Extra CSV tables (name, content).
  std::vector<std::pair<std::string, std::string>> tables;
  bool pass = false;

  void decide();
  std::string to_json() const;
};

SuiteResult run_suite(const ExperimentConfig& cfg);

SuiteResult run_suite_shift_de(const ShiftDeConfig& c, const RunOptions& opt);
SuiteResult run_suite_shift_sa(const ShiftSaConfig& c, const RunOptions& opt);
SuiteResult run_suite_osp_lpp(const OspLppConfig& c, const RunOptions& opt);
SuiteResult run_suite_asymptotics(const AsymptoticsConfig& c, const RunOptions& opt);
SuiteResult run_suite_sixvertex(const SixVertexConfig& c, const RunOptions& opt);
SuiteResult run_suite_fg(const FgConfig& c, const RunOptions& opt);
SuiteResult run_suite_coupling(const CouplingConfig& c, const RunOptions& opt);

/// Runs f(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots so the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::int64_t n, int threads, F&& f) {
  if (n <= 0) return;
  const int nt = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, n)));
  if (nt == 1) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Key of trial `trial` on side `side` in repetition `rep`.
std::uint64_t trial_key(std::uint64_t seed, int rep, std::int64_t trial, int side);

/// Region V_i of (B, C) in [1,B_i] x [1,C_i] whose rectangles are ordered with
/// every other configured rectangle, before and after the change of A.
struct SaRegion {
  std::vector<std::pair<int, int>> points;  // (B, C), row-major by B then C
  int b_lo = 0, b_hi = -1, c_lo = 0, c_hi = -1;

  bool empty() const noexcept { return points.empty(); }
  bool contains(int b, int c) const noexcept {
    return !empty() && b >= b_lo && b <= b_hi && c >= c_lo && c <= c_hi;
  }
};
std::vector<SaRegion> sa_regions(const ShiftSaConfig& c);
/// W_i: points of V_i whose in-quadrant predecessors all lie in V_i.
std::vector<std::pair<int, int>> sa_w_points(const SaRegion& v);

/// Joint density of (T^0_{3,1}, T^0_{1,2}); the pair with T^1_{1,2} has the same law.
double density_pair_unshifted(double t1, double t2);
/// Joint density of (T^0_{3,1}, T^2_{1,2}).
double density_pair_shift2(double t1, double t2);
/// Integral of density_pair_unshifted over [a1,b1] x [a2,b2] (b may be +inf).
double density_pair_mass(double a1, double b1, double a2, double b2);

/// Histogram check of (T^0_{3,1}, T^0_{1,2}) against the closed-form density,
/// 4 standard errors per bin.
TestReport density_histogram_check(std::int64_t trials, std::uint64_t seed, int threads);

/// Joint law of (L^A, L^{A+1}) from the shift coupling vs from one shared-clock
/// TASEP run, on a dim x dim grid.
TestReport shift_coupling_joint_check(std::int64_t trials, int dim, const RunOptions& opt);

}  // namespace swaplab
