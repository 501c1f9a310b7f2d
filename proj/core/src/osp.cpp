#include "swaplab/osp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swaplab/errors.hpp"
#include "swaplab/exclusion.hpp"

namespace swaplab {

double OspTrajectory::finishing_time(int k) const {
  if (k < 0 || k > n) throw DomainError("finishing time index out of range");
  if (k == 0 || k == n) return 0.0;
  return finishing[static_cast<std::size_t>(k - 1)];
}

std::string OspTrajectory::events_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "time,edge\n";
  for (const auto& e : events) os << e.time << ',' << e.edge << '\n';
  return os.str();
}

OspTrajectory simulate_osp(ClockField& field, int n, bool record_events) {
  if (n < 2) throw DomainError("OSP needs N >= 2");
  const SiteInterval window{1, n};
  std::vector<Color> values(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = k + 1;
  ColoredExclusion sim(field, window, std::move(values));

  OspTrajectory traj;
  traj.n = n;
  traj.finishing.assign(static_cast<std::size_t>(n - 1), 0.0);
  const auto total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  if (record_events) traj.events.reserve(total);
  std::size_t swaps = 0;
  while (sim.ascents() > 0) {
    const SwapEvent ev = sim.step();
    ++swaps;
    traj.finishing[static_cast<std::size_t>(ev.site - 1)] = ev.time;
    if (record_events) traj.events.push_back({ev.time, static_cast<int>(ev.site)});
  }
  if (swaps != total) throw InvariantError("OSP absorbed after a non-minimal number of swaps");

  const auto it = std::max_element(traj.finishing.begin(), traj.finishing.end());
  traj.absorbing_time = *it;
  traj.last_swap_location = static_cast<int>(it - traj.finishing.begin()) + 1;
  if (std::count(traj.finishing.begin(), traj.finishing.end(), traj.absorbing_time) != 1) {
    throw TieError("last swap location is not unique");
  }
  traj.final_values.reserve(static_cast<std::size_t>(n));
  for (Color c : sim.colors()) traj.final_values.push_back(static_cast<int>(c));
  return traj;
}

std::vector<double> finishing_vector(const OspTrajectory& traj) { return traj.finishing; }

bool lal_indicator(const OspTrajectory& traj, int k) {
  if (k < 1 || k > traj.n) throw DomainError("LAL index out of range");
  return traj.finishing_time(traj.n + 1 - k) > traj.finishing_time(traj.n - k);
}

bool is_sorting_network(const OspTrajectory& traj) {
  std::vector<int> v(static_cast<std::size_t>(traj.n));
  for (int k = 0; k < traj.n; ++k) v[static_cast<std::size_t>(k)] = k + 1;
  double last = -1.0;
  for (const auto& e : traj.events) {
    if (e.edge < 1 || e.edge >= traj.n || !(e.time > last)) return false;
    auto& lo = v[static_cast<std::size_t>(e.edge - 1)];
    auto& hi = v[static_cast<std::size_t>(e.edge)];
    if (lo > hi) return false;
    std::swap(lo, hi);
    last = e.time;
  }
  for (int k = 0; k < traj.n; ++k) {
    if (v[static_cast<std::size_t>(k)] != traj.n - k) return false;
  }
  return traj.events.size() == static_cast<std::size_t>(traj.n) * (traj.n - 1) / 2;
}

FiniteConfig FiniteConfig::from_sites(std::vector<Site> sites) {
  std::sort(sites.begin(), sites.end());
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
    throw ConfigError("duplicate particle site");
  }
  return FiniteConfig{std::move(sites)};
}

FiniteConfig cutoff(const FiniteConfig& config, std::int64_t k) {
  if (k < 1) throw DomainError("cut-off needs k >= 1");
  const auto& p = config.particles;
  if (static_cast<std::int64_t>(p.size()) <= k) return config;
  return FiniteConfig{std::vector<Site>(p.end() - k, p.end())};
}

FiniteConfig pushback(const FiniteConfig& config, Site n) {
  FiniteConfig out = config;
  auto& p = out.particles;
  const auto m = static_cast<std::int64_t>(p.size());
  for (std::int64_t idx = 0; idx < m; ++idx) {
    const std::int64_t j = m - idx;  // j-th rightmost
    p[static_cast<std::size_t>(idx)] = std::min(p[static_cast<std::size_t>(idx)], n + 1 - j);
  }
  return out;
}

namespace {

FiniteConfig particles_of(const ColoredExclusion& sim) {
  FiniteConfig c;
  const auto colors = sim.colors();
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (colors[i] != kHole) c.particles.push_back(sim.window().lo + static_cast<Site>(i));
  }
  return c;
}

ColoredExclusion step_initial(ClockField& field, SiteInterval window, int a) {
  std::vector<Color> colors(static_cast<std::size_t>(window.size()), kHole);
  for (Site x = 1; x <= a; ++x) colors[static_cast<std::size_t>(x - window.lo)] = 0;
  return ColoredExclusion(field, window, std::move(colors));
}

}  // namespace

bool check_cbopera(ClockField& field, int n, int a, double horizon) {
  return check_cbopera(field, field, n, a, horizon);
}

bool check_cbopera(ClockField& mu_field, ClockField& nu_field, int n, int a, double horizon) {
  if (n < 2 || a < 1 || a > n - 1) throw DomainError("cbopera check needs 1 <= A <= N-1");
  if (horizon < 0.0) throw DomainError("horizon must be >= 0");
  const SiteInterval mu_window{1, mu_field.window().hi};
  if (mu_field.window().lo > 1 || mu_window.hi < n || nu_field.window().lo > 1 ||
      nu_field.window().hi < n) {
    throw ConfigError("clock fields must cover sites 1..N");
  }
  // mu^A keeps only its A rightmost particles, which start on 1..A; particles
  // left of site 1 never interact with them.
  ColoredExclusion mu = step_initial(mu_field, mu_window, a);
  ColoredExclusion nu = step_initial(nu_field, {1, n}, a);

  auto agree = [&] {
    return pushback(cutoff(particles_of(mu), a), n) == particles_of(nu);
  };
  if (!agree()) return false;
  while (true) {
    const double tm = mu.next_event_time();
    const double tn = nu.next_event_time();
    const double t = std::min(tm, tn);
    if (t > horizon || std::isinf(t)) return true;
    if (tm == t) mu.step();
    if (tn == t) nu.step();
    if (!agree()) return false;
  }
}

}  // namespace swaplab
