#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swaplab/clock_field.hpp"

namespace swaplab {

struct OspEvent {
  double time = 0.0;
  int edge = 0;  // swap across sites (edge, edge+1)
};

/// One run of the oriented swap process on {1, ..., N} until absorption.
struct OspTrajectory {
  int n = 0;
  std::vector<OspEvent> events;     // empty when not recorded
  std::vector<double> finishing;    // U_N(1..N-1), stored 0-based
  int last_swap_location = 0;       // k*
  double absorbing_time = 0.0;
  std::vector<int> final_values;    // values at sites 1..N

  /// U_N(k) with the sentinel convention U_N(0) = U_N(N) = 0.
  double finishing_time(int k) const;
  std::string events_csv() const;
};

/// Runs the OSP with the field's clocks on edges (k, k+1), 1 <= k <= N-1.
/// The field window must contain [1, N].
OspTrajectory simulate_osp(ClockField& field, int n, bool record_events = true);

/// U_N as a vector of N-1 finishing times.
std::vector<double> finishing_vector(const OspTrajectory& traj);

/// Last jump of the number k is to the left: U_N(N+1-k) > U_N(N-k).
bool lal_indicator(const OspTrajectory& traj, int k);

/// Replays the event log from the identity, checking that every swap
/// increases inversions and that the reverse permutation is reached.
bool is_sorting_network(const OspTrajectory& traj);

/// Particle-hole configuration with finitely many particles (sorted sites).
struct FiniteConfig {
  std::vector<Site> particles;

  static FiniteConfig from_sites(std::vector<Site> sites);
  friend bool operator==(const FiniteConfig&, const FiniteConfig&) = default;
};

/// Keeps the k rightmost particles (identity when there are fewer than k).
FiniteConfig cutoff(const FiniteConfig& config, std::int64_t k);

/// Moves the j-th rightmost particle from x to min(x, n+1-j).
FiniteConfig pushback(const FiniteConfig& config, Site n);

/// Runs mu^A (colors <= A as particles, starting on 1..A, on the field window)
/// and nu^{N,A} (TASEP on {1..N} with particles on 1..A) with the same clocks
/// on edges 1..N-1, and reports whether B_N R_A mu^A equals nu^{N,A} after
/// every event up to the horizon. The field window must contain [1, N].
bool check_cbopera(ClockField& field, int n, int a, double horizon);

/// Negative-control form: nu^{N,A} reads its clocks from a separate field.
bool check_cbopera(ClockField& mu_field, ClockField& nu_field, int n, int a, double horizon);

}  // namespace swaplab
