#include "swaplab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "swaplab/egcomb.hpp"
#include "swaplab/errors.hpp"
#include "swaplab/lpp.hpp"
#include "swaplab/osp.hpp"
#include "swaplab/six_vertex.hpp"
#include "swaplab/tasep.hpp"

namespace swaplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t trials_or(const RunOptions& opt, std::int64_t fallback) {
  return opt.trials > 0 ? opt.trials : fallback;
}

std::string rect_label(const RectangleSpec& r) {
  return "T^" + std::to_string(r.a) + "_{" + std::to_string(r.b) + "," + std::to_string(r.c) + "}";
}

std::uint64_t rep_seed(std::uint64_t seed, int rep) { return derive_key(seed, 0x5E9, rep); }

// Fills the two equality-test components shared by most suites.
void equality_tests(TestReport& rep, const SampleMatrix& a, const SampleMatrix& b,
                    const RunOptions& opt, std::uint64_t perm_seed, bool with_energy = true) {
  rep.marginals = marginal_tests(a, b);
  if (with_energy)
    rep.energy = energy_permutation_test(a, b, opt.permutations, perm_seed, opt.energy_cap);
  rep.alpha = opt.alpha;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::uint64_t trial_key(std::uint64_t seed, int rep, std::int64_t trial, int side) {
  return derive_key(rep_seed(seed, rep), static_cast<std::uint64_t>(trial),
                    static_cast<std::uint64_t>(side));
}

void SuiteResult::decide() {
  pass = !reports.empty() &&
         std::all_of(reports.begin(), reports.end(), [](const TestReport& r) { return r.pass; });
}

std::string SuiteResult::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["pass"] = pass;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(nlohmann::ordered_json::parse(r.to_json()));
  return j.dump(2);
}

// ------------------------------------------------------------------ shift-de

namespace {

// Per-trial vector {max_j T^{A_ij}_{B_ij,C_ij}}_i for one side.
SampleMatrix sample_group_maxima(const std::vector<std::vector<RectangleSpec>>& groups,
                                 std::int64_t trials, std::uint64_t seed, int rep, int side,
                                 int threads, const std::vector<std::string>& labels) {
  std::vector<PassageQuery> queries;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (const auto& r : groups[i]) {
      queries.push_back({r.a, r.b, r.c});
      owner.push_back(i);
    }
  const std::size_t g = groups.size();
  std::vector<double> out(static_cast<std::size_t>(trials) * g, 0.0);
  parallel_for(trials, threads, [&](std::int64_t t) {
    const auto times = sample_passage_times(trial_key(seed, rep, t, side), queries);
    double* row = &out[static_cast<std::size_t>(t) * g];
    for (std::size_t q = 0; q < times.size(); ++q) row[owner[q]] = std::max(row[owner[q]], times[q]);
  });
  SampleMatrix m(labels, seed);
  for (std::int64_t t = 0; t < trials; ++t)
    m.add_row(std::span<const double>(&out[static_cast<std::size_t>(t) * g], g));
  return m;
}

std::vector<std::string> group_labels(const std::vector<std::vector<RectangleSpec>>& groups) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::string l = "group" + std::to_string(i + 1) + ":max(";
    for (std::size_t j = 0; j < groups[i].size(); ++j) l += (j ? "," : "") + rect_label(groups[i][j]);
    labels.push_back(l + ")");
  }
  return labels;
}

// Probability that every coordinate is <= its threshold, with its standard error.
std::pair<double, double> joint_cdf(const SampleMatrix& m, const std::vector<double>& t) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < m.trials(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < t.size(); ++k) ok = ok && m.at(i, k) <= t[k];
    hit += ok;
  }
  const double n = static_cast<double>(m.trials());
  const double p = static_cast<double>(hit) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

// Binned counts of 2-D samples on the region first > second, plus one cell for the rest.
std::vector<std::uint64_t> region_counts(const SampleMatrix& m, const std::vector<double>& e1,
                                         const std::vector<double>& e2) {
  const std::size_t k1 = e1.size() + 1, k2 = e2.size() + 1;
  std::vector<std::uint64_t> counts(k1 * k2 + 1, 0);
  for (std::size_t i = 0; i < m.trials(); ++i) {
    const double t1 = m.at(i, 0), t2 = m.at(i, 1);
    if (!(t1 > t2)) {
      ++counts.back();
      continue;
    }
    const std::size_t b1 = static_cast<std::size_t>(std::upper_bound(e1.begin(), e1.end(), t1) - e1.begin());
    const std::size_t b2 = static_cast<std::size_t>(std::upper_bound(e2.begin(), e2.end(), t2) - e2.begin());
    ++counts[b1 * k2 + b2];
  }
  return counts;
}

std::vector<double> pooled_quantile_edges(std::vector<double> v, int bins) {
  std::sort(v.begin(), v.end());
  std::vector<double> edges;
  for (int k = 1; k < bins; ++k) edges.push_back(v[v.size() * k / bins]);
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

SuiteResult run_suite_shift_de(const ShiftDeConfig& c, const RunOptions& opt) {
  SuiteResult res;
  res.suite = "shift-de";
  const auto shifted = shifted_groups(c);
  const auto labels = group_labels(c.groups);
  const std::int64_t trials = trials_or(opt, 100000);

  for (int rep = 0; rep < opt.repetitions; ++rep) {
    const SampleMatrix a = sample_group_maxima(c.groups, trials, opt.seed, rep, 0, opt.threads, labels);
    const SampleMatrix b = sample_group_maxima(shifted, trials, opt.seed, rep, 1, opt.threads, labels);
    TestReport r;
    r.name = std::string(c.negative_control ? "negative-control" : "shift-de") + " rep " +
             std::to_string(rep);
    r.alpha = opt.alpha;
    r.notes.push_back("shift " + std::to_string(c.shift) + " applied to groups " +
                      std::to_string(c.iota + 1) + ".." + std::to_string(c.groups.size()));
    if (c.negative_control) {
      r.expect_equal = false;
      r.notes.push_back("ordering hypothesis violated: " + check_shift_de(c));
    }
    if (c.region_first_greater) {
      // Both laws put the same total mass on {t1 > t2}; compare the binned
      // shape of the sample inside that region.
      std::vector<double> pooled1 = a.column(0), pooled2 = a.column(1);
      const auto b1 = b.column(0), b2 = b.column(1);
      pooled1.insert(pooled1.end(), b1.begin(), b1.end());
      pooled2.insert(pooled2.end(), b2.begin(), b2.end());
      const auto e1 = pooled_quantile_edges(pooled1, 6);
      const auto e2 = pooled_quantile_edges(pooled2, 6);
      r.chi_square.push_back({"binned (t1,t2) on t1 > t2", chi_square_two_sample(
                                  region_counts(a, e1, e2), region_counts(b, e1, e2))});
    } else {
      equality_tests(r, a, b, opt, derive_key(rep_seed(opt.seed, rep), 0xE))
      ;
    }
    if (!c.event_times.empty()) {
      const auto [pa, sa] = joint_cdf(a, c.event_times);
      const auto [pb, sb] = joint_cdf(b, c.event_times);
      const double se = std::sqrt(sa * sa + sb * sb);
      r.checks.push_back(scalar_check("P[all group maxima <= t] difference (4 s.e.)", pa - pb, 0.0,
                                      std::max(4.0 * se, 1e-12)));
      r.notes.push_back("P_original = " + fmt(pa) + ", P_shifted = " + fmt(pb));
    }
    r.decide();
    res.reports.push_back(std::move(r));
    if (rep == 0) {
      res.samples.emplace_back("original", a);
      res.samples.emplace_back("shifted", b);
    }
  }
  if (c.density_trials > 0)
    res.reports.push_back(density_histogram_check(c.density_trials, opt.seed, opt.threads));
  res.decide();
  return res;
}

double density_pair_unshifted(double t1, double t2) {
  if (t1 < 0.0 || t2 < 0.0) return 0.0;
  if (t1 <= t2) return std::exp(-t2) - std::exp(-t1 - t2) * (1.0 + t1);
  return std::exp(-t1) * (t1 - t2 + 1.0) - std::exp(-t1 - t2) * (1.0 + t1);
}

double density_pair_shift2(double t1, double t2) {
  if (t1 < 0.0 || t2 < 0.0) return 0.0;
  if (t1 <= t2) return std::exp(-t2) - std::exp(-t1 - t2) * (1.0 + t1);
  const double d = t1 - t2;
  return 2.0 * std::exp(-t1) + std::exp(-t1 - t2) * (t2 * d * d / 2.0 - 2.0 * (t2 + 1.0));
}

double density_pair_mass(double a1, double b1, double a2, double b2) {
  using boost::math::quadrature::gauss_kronrod;
  constexpr double kCap = 60.0;  // e^{-60} tail is far below double resolution of the masses
  b1 = std::min(b1, kCap);
  b2 = std::min(b2, kCap);
  if (!(a1 < b1) || !(a2 < b2)) return 0.0;
  auto inner = [&](double t1) {
    auto f = [&](double t2) { return density_pair_unshifted(t1, t2); };
    // split the t2 range at the kink t2 = t1
    if (t1 > a2 && t1 < b2)
      return gauss_kronrod<double, 31>::integrate(f, a2, t1, 8, 1e-12) +
             gauss_kronrod<double, 31>::integrate(f, t1, b2, 8, 1e-12);
    return gauss_kronrod<double, 31>::integrate(f, a2, b2, 8, 1e-12);
  };
  // the t1-integrand has a kink where t1 crosses [a2, b2]
  std::vector<double> cuts{a1};
  for (double k : {a2, b2})
    if (k > a1 && k < b1) cuts.push_back(k);
  cuts.push_back(b1);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += gauss_kronrod<double, 31>::integrate(inner, cuts[i], cuts[i + 1], 8, 1e-11);
  return total;
}

TestReport density_histogram_check(std::int64_t trials, std::uint64_t seed, int threads) {
  const std::vector<PassageQuery> queries{{0, 3, 1}, {0, 1, 2}};
  const std::vector<double> edges{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 7.0, kInf};
  const std::size_t k = edges.size() - 1;
  std::vector<std::uint8_t> cell(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](std::int64_t t) {
    const auto v = sample_passage_times(derive_key(seed, 0xDE5, static_cast<std::uint64_t>(t)), queries);
    auto bin = [&](double x) {
      return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin()) - 1;
    };
    cell[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(bin(v[0]) * k + bin(v[1]));
  });
  std::vector<std::uint64_t> counts(k * k, 0);
  for (auto c : cell) ++counts[c];

  TestReport r;
  r.name = "density histogram (T^0_{3,1}, T^0_{1,2})";
  const double n = static_cast<double>(trials);
  int tested = 0, failed = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double p = density_pair_mass(edges[i], edges[i + 1], edges[j], edges[j + 1]);
      const double expected = n * p;
      if (expected < 20.0) continue;  // normal approximation of the bin count
      const double se = std::sqrt(n * p * (1.0 - p));
      const double z = (static_cast<double>(counts[i * k + j]) - expected) / se;
      ++tested;
      worst = std::max(worst, std::abs(z));
      if (std::abs(z) > 4.0) ++failed;
    }
  r.checks.push_back(scalar_check("bins outside 4 s.e.", failed, 0.0, 0.0));
  r.notes.push_back(std::to_string(tested) + " bins tested, largest |z| = " + fmt(worst));
  r.decide();
  return r;
}

// ------------------------------------------------------------------ shift-sa

std::vector<SaRegion> sa_regions(const ShiftSaConfig& c) {
  auto ordered = [](const RectangleSpec& x, const RectangleSpec& y) {
    return rectangle_leq(x, y) || rectangle_leq(y, x);
  };
  std::vector<SaRegion> out(c.rects.size());
  for (std::size_t i = 0; i < c.rects.size(); ++i) {
    SaRegion& v = out[i];
    const auto& ri = c.rects[i];
    v.b_lo = v.c_lo = std::numeric_limits<int>::max();
    v.b_hi = v.c_hi = std::numeric_limits<int>::min();
    for (int b = 1; b <= ri.b; ++b)
      for (int cc = 1; cc <= ri.c; ++cc) {
        bool ok = true;
        for (std::size_t j = 0; j < c.rects.size() && ok; ++j) {
          if (j == i) continue;
          const auto& rj = c.rects[j];
          ok = ordered({rj.a, rj.b, rj.c}, {ri.a, b, cc}) &&
               ordered({c.shifted_a[j], rj.b, rj.c}, {c.shifted_a[i], b, cc});
        }
        if (!ok) continue;
        v.points.emplace_back(b, cc);
        v.b_lo = std::min(v.b_lo, b);
        v.b_hi = std::max(v.b_hi, b);
        v.c_lo = std::min(v.c_lo, cc);
        v.c_hi = std::max(v.c_hi, cc);
      }
    if (v.empty()) {
      v.b_lo = v.c_lo = 0;
      v.b_hi = v.c_hi = -1;
      continue;
    }
    const auto area = static_cast<std::size_t>(v.b_hi - v.b_lo + 1) * (v.c_hi - v.c_lo + 1);
    if (area != v.points.size() || v.b_hi != ri.b || v.c_hi != ri.c)
      throw InvariantError("region V_" + std::to_string(i + 1) + " is not a rectangle ending at (B_i, C_i)");
  }
  return out;
}

std::vector<std::pair<int, int>> sa_w_points(const SaRegion& v) {
  std::vector<std::pair<int, int>> w;
  for (auto [b, c] : v.points) {
    const bool left = b == 1 || v.contains(b - 1, c);
    const bool down = c == 1 || v.contains(b, c - 1);
    if (left && down) w.emplace_back(b, c);
  }
  return w;
}

namespace {

struct SaSample {
  SampleMatrix times;
  std::vector<std::string> geodesics;
};

SaSample sample_sa(const ShiftSaConfig& c, const std::vector<std::int64_t>& as,
                   const std::vector<SaRegion>& v, std::int64_t trials, std::uint64_t seed, int rep,
                   int side, int threads) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < c.rects.size(); ++i)
    for (auto [b, cc] : v[i].points)
      labels.push_back("V" + std::to_string(i + 1) + ":T_{" + std::to_string(b) + "," +
                       std::to_string(cc) + "}");

  // Queries: full rectangles when geodesics are needed, otherwise V_i only.
  std::vector<PassageQuery> queries;
  std::vector<std::size_t> first(c.rects.size());
  for (std::size_t i = 0; i < c.rects.size(); ++i) {
    first[i] = queries.size();
    if (c.geodesic) {
      for (int b = 1; b <= c.rects[i].b; ++b)
        for (int cc = 1; cc <= c.rects[i].c; ++cc) queries.push_back({as[i], b, cc});
    } else {
      for (auto [b, cc] : v[i].points) queries.push_back({as[i], b, cc});
    }
  }
  std::vector<std::vector<std::pair<int, int>>> w(c.rects.size());
  for (std::size_t i = 0; i < c.rects.size(); ++i) w[i] = sa_w_points(v[i]);

  const std::size_t d = labels.size();
  std::vector<double> rows(static_cast<std::size_t>(trials) * d);
  std::vector<std::string> geo(c.geodesic ? static_cast<std::size_t>(trials) : 0);
  parallel_for(trials, threads, [&](std::int64_t t) {
    const auto times = sample_passage_times(trial_key(seed, rep, t, side), queries);
    double* row = &rows[static_cast<std::size_t>(t) * d];
    std::size_t col = 0;
    std::string key;
    for (std::size_t i = 0; i < c.rects.size(); ++i) {
      const int bm = static_cast<int>(c.rects[i].b), cm = static_cast<int>(c.rects[i].c);
      if (c.geodesic) {
        PassageTimeTable table(as[i], bm, cm,
                               std::vector<double>(times.begin() + static_cast<std::ptrdiff_t>(first[i]),
                                                   times.begin() + static_cast<std::ptrdiff_t>(first[i]) + bm * cm));
        for (auto [b, cc] : v[i].points) row[col++] = table.at(b, cc);
        const Geodesic g = geodesic(extract_weight_field(table), {1, 1}, {bm, cm});
        key += std::to_string(i + 1) + ":";
        for (const auto& p : g.path)
          if (std::find(w[i].begin(), w[i].end(), std::make_pair(p.b, p.c)) != w[i].end())
            key += "(" + std::to_string(p.b) + "," + std::to_string(p.c) + ")";
        key += ";";
      } else {
        for (std::size_t k = 0; k < v[i].points.size(); ++k) row[col++] = times[first[i] + k];
      }
    }
    if (c.geodesic) geo[static_cast<std::size_t>(t)] = std::move(key);
  });
  SaSample s{SampleMatrix(labels, seed), std::move(geo)};
  for (std::int64_t t = 0; t < trials; ++t)
    s.times.add_row(std::span<const double>(&rows[static_cast<std::size_t>(t) * d], d));
  return s;
}

}  // namespace

SuiteResult run_suite_shift_sa(const ShiftSaConfig& c, const RunOptions& opt) {
  SuiteResult res;
  res.suite = c.geodesic ? "geodesic" : "shift-sa";
  const auto v = sa_regions(c);
  std::vector<std::int64_t> original;
  for (const auto& r : c.rects) original.push_back(r.a);
  const std::int64_t trials = trials_or(opt, 20000);

  std::ostringstream regions;
  for (std::size_t i = 0; i < v.size(); ++i) {
    regions << "V" << i + 1 << " = ";
    if (v[i].empty()) regions << "empty";
    else regions << "[" << v[i].b_lo << "," << v[i].b_hi << "]x[" << v[i].c_lo << "," << v[i].c_hi << "]";
    regions << (i + 1 < v.size() ? "; " : "");
  }

  for (int rep = 0; rep < opt.repetitions; ++rep) {
    const SaSample a = sample_sa(c, original, v, trials, opt.seed, rep, 0, opt.threads);
    const SaSample b = sample_sa(c, c.shifted_a, v, trials, opt.seed, rep, 1, opt.threads);
    TestReport r;
    r.name = "shift-sa rep " + std::to_string(rep);
    r.notes.push_back(regions.str());
    equality_tests(r, a.times, b.times, opt, derive_key(rep_seed(opt.seed, rep), 0x5A));
    r.decide();
    res.reports.push_back(std::move(r));
    if (c.geodesic) {
      TestReport g;
      g.name = "geodesic shapes in W_i rep " + std::to_string(rep);
      g.alpha = opt.alpha;
      g.chi_square.push_back({"geodesic restricted to W_i", chi_square_categorical(a.geodesics, b.geodesics)});
      std::set<std::string> cats(a.geodesics.begin(), a.geodesics.end());
      g.notes.push_back(std::to_string(cats.size()) + " distinct shapes in the original sample");
      g.decide();
      res.reports.push_back(std::move(g));
    }
    if (rep == 0) {
      res.samples.emplace_back("original", a.times);
      res.samples.emplace_back("shifted", b.times);
    }
  }
  res.decide();
  return res;
}

// ------------------------------------------------------------------ osp-lpp

SuiteResult run_suite_osp_lpp(const OspLppConfig& c, const RunOptions& opt) {
  SuiteResult res;
  res.suite = "osp-lpp";
  const int n = c.n;
  const std::int64_t trials = trials_or(opt, 20000);
  std::vector<std::string> labels;
  for (int k = 1; k < n; ++k) labels.push_back("U(" + std::to_string(k) + ")");

  for (int rep = 0; rep < opt.repetitions; ++rep) {
    const std::size_t d = static_cast<std::size_t>(n - 1);
    std::vector<double> u(static_cast<std::size_t>(trials) * d), l(u.size());
    std::vector<int> kstar_u(static_cast<std::size_t>(trials)), kstar_l(kstar_u.size());
    parallel_for(trials, opt.threads, [&](std::int64_t t) {
      ClockField field(trial_key(opt.seed, rep, t, 0), {1, n});
      const OspTrajectory traj = simulate_osp(field, n, false);
      std::copy(traj.finishing.begin(), traj.finishing.end(), u.begin() + static_cast<std::ptrdiff_t>(t * d));
      kstar_u[static_cast<std::size_t>(t)] = traj.last_swap_location;

      const LppField f = sample_field(trial_key(opt.seed, rep, t, 1), n - 1, n - 1);
      const auto grid = passage_grid(f, {1, 1}, {n - 1, n - 1});
      double best = -1.0;
      for (int k = 1; k < n; ++k) {
        const double v = grid[static_cast<std::size_t>(k - 1) * d + static_cast<std::size_t>(n - k - 1)];
        l[static_cast<std::size_t>(t) * d + static_cast<std::size_t>(k - 1)] = v;
        if (v > best) {
          best = v;
          kstar_l[static_cast<std::size_t>(t)] = k;
        }
      }
    });
    SampleMatrix a(labels, opt.seed), b(labels, opt.seed);
    for (std::int64_t t = 0; t < trials; ++t) {
      a.add_row(std::span<const double>(&u[static_cast<std::size_t>(t) * d], d));
      b.add_row(std::span<const double>(&l[static_cast<std::size_t>(t) * d], d));
    }
    TestReport r;
    r.name = "U_N vs L_{(1,1),(k,N-k)} N=" + std::to_string(n) + " rep " + std::to_string(rep);
    equality_tests(r, a, b, opt, derive_key(rep_seed(opt.seed, rep), 0x05));
    const Moments m1 = moments(a.column(0));
    r.checks.push_back(scalar_check("E[U_N(1)] = N-1 (4 s.e.)", m1.mean, n - 1.0, 4.0 * m1.std_error));

    // absorbing time and last-swap location
    std::vector<double> max_u(static_cast<std::size_t>(trials)), max_l(max_u.size());
    std::vector<std::string> ks_u(max_u.size()), ks_l(max_u.size());
    for (std::size_t t = 0; t < max_u.size(); ++t) {
      max_u[t] = *std::max_element(u.begin() + static_cast<std::ptrdiff_t>(t * d),
                                   u.begin() + static_cast<std::ptrdiff_t>((t + 1) * d));
      max_l[t] = *std::max_element(l.begin() + static_cast<std::ptrdiff_t>(t * d),
                                   l.begin() + static_cast<std::ptrdiff_t>((t + 1) * d));
      ks_u[t] = std::to_string(kstar_u[t]);
      ks_l[t] = std::to_string(kstar_l[t]);
    }
    MarginalTest absorb;
    absorb.label = "absorbing time vs max_k L";
    absorb.ks = ks_two_sample(max_u, max_l);
    absorb.a = moments(max_u);
    absorb.b = moments(max_l);
    r.marginals.push_back(absorb);
    r.chi_square.push_back({"k* vs argmax_k L", chi_square_categorical(ks_u, ks_l)});
    r.decide();
    res.reports.push_back(std::move(r));
    if (rep == 0) {
      res.samples.emplace_back("osp", a);
      res.samples.emplace_back("lpp", b);
    }
  }
  res.decide();
  return res;
}

// ------------------------------------------------------------------ asymptotics

SuiteResult run_suite_asymptotics(const AsymptoticsConfig& c, const RunOptions& opt) {
  SuiteResult res;
  res.suite = "asymptotics";
  std::ostringstream csv;
  csv << "quantity,N,y,value,reference\n";

  if (c.run_lal) {
    const std::int64_t trials = c.lal_trials;
    const int n = c.lal_n;
    std::vector<std::vector<char>> hit(c.lal_y.size(), std::vector<char>(static_cast<std::size_t>(trials)));
    parallel_for(trials, opt.threads, [&](std::int64_t t) {
      ClockField field(trial_key(opt.seed, 0, t, 0x1A1), {1, n});
      const OspTrajectory traj = simulate_osp(field, n, false);
      for (std::size_t k = 0; k < c.lal_y.size(); ++k) {
        const int kk = std::max(1, static_cast<int>(std::floor(c.lal_y[k] * n)));
        hit[k][static_cast<std::size_t>(t)] = lal_indicator(traj, kk);
      }
    });
    TestReport r;
    r.name = "LAL probability N=" + std::to_string(n);
    for (std::size_t k = 0; k < c.lal_y.size(); ++k) {
      const double y = c.lal_y[k];
      const double p = static_cast<double>(std::count(hit[k].begin(), hit[k].end(), 1)) /
                       static_cast<double>(trials);
      const double ref = std::sqrt(y) / (std::sqrt(y) + std::sqrt(1.0 - y));
      r.checks.push_back(scalar_check("P[LAL] at y=" + fmt(y), p, ref, c.lal_tolerance));
      csv << "lal," << n << ',' << y << ',' << p << ',' << ref << '\n';
    }
    r.decide();
    res.reports.push_back(std::move(r));
  }

  if (c.run_increments) {
    const int n = c.increment_n;
    const int h = c.increment_halfwidth;
    const int center = static_cast<int>(std::floor(c.increment_y * n));
    if (center - h < 1 || center + h > n - 1) throw ConfigError("asymptotics: increment window leaves [1, N-1]");
    const std::int64_t trials = (c.increments + 2 * h - 1) / (2 * h);
    std::vector<double> inc(static_cast<std::size_t>(trials) * 2 * h);
    parallel_for(trials, opt.threads, [&](std::int64_t t) {
      ClockField field(trial_key(opt.seed, 0, t, 0x1C), {1, n});
      const OspTrajectory traj = simulate_osp(field, n, false);
      for (int j = 0; j < 2 * h; ++j) {
        const int k = center - h + j;
        inc[static_cast<std::size_t>(t) * 2 * h + j] = traj.finishing_time(k + 1) - traj.finishing_time(k);
      }
    });
    inc.resize(static_cast<std::size_t>(c.increments));
    const IncrementLaw law(c.increment_y);
    TestReport r;
    r.name = "local increments N=" + std::to_string(n) + " y=" + fmt(c.increment_y);
    r.alpha = opt.alpha;
    MarginalTest m;
    m.label = "U(k+1)-U(k) vs increment law";
    m.ks = ks_one_sample(inc, [&](double x) { return law.cdf(x); });
    m.a = moments(inc);
    r.marginals.push_back(m);
    r.checks.push_back(scalar_check("increment variance", m.a.variance, law.variance(), c.variance_tolerance));
    r.notes.push_back("k in [" + std::to_string(center - h) + ", " + std::to_string(center + h - 1) +
                      "], " + std::to_string(trials) + " trajectories");
    csv << "increment_variance," << n << ',' << c.increment_y << ',' << m.a.variance << ',' << law.variance() << '\n';
    r.decide();
    res.reports.push_back(std::move(r));
    SampleMatrix dump({"increment"}, opt.seed);
    for (double v : inc) dump.add_row(std::span<const double>(&v, 1));
    res.samples.emplace_back("increments", std::move(dump));
  }

  if (c.run_scaling) {
    const std::int64_t trials = c.scaling_trials;
    TestReport r;
    r.name = "scaling trends";
    {
      const int n = c.max_n;
      std::vector<double> mx(static_cast<std::size_t>(trials));
      parallel_for(trials, opt.threads, [&](std::int64_t t) {
        ClockField field(trial_key(opt.seed, 0, t, 0x3A), {1, n});
        mx[static_cast<std::size_t>(t)] = simulate_osp(field, n, false).absorbing_time;
      });
      const double ratio = moments(mx).mean / n;
      r.checks.push_back(scalar_check("mean(max_k U_N(k))/N at N=" + std::to_string(n), ratio, 2.0,
                                      c.max_tolerance * 2.0));
      csv << "max_over_N," << n << ",," << ratio << ",2\n";
    }
    std::vector<double> spread;
    for (int n : c.location_n) {
      std::vector<double> loc(static_cast<std::size_t>(trials));
      parallel_for(trials, opt.threads, [&](std::int64_t t) {
        ClockField field(trial_key(opt.seed, 0, t, 0x3B0000 + static_cast<std::uint64_t>(n)), {1, n});
        loc[static_cast<std::size_t>(t)] = simulate_osp(field, n, false).last_swap_location - n / 2.0;
      });
      const double s = std::sqrt(moments(loc).variance) / std::pow(n, 2.0 / 3.0);
      spread.push_back(s);
      const double mid = 0.5 * (c.band_lo + c.band_hi);
      r.checks.push_back(scalar_check("std(k*-N/2)/N^(2/3) at N=" + std::to_string(n), s, mid,
                                      0.5 * (c.band_hi - c.band_lo)));
      csv << "argmax_spread," << n << ",," << s << ",\n";
    }
    if (spread.size() >= 2)
      r.checks.push_back(scalar_check("spread ratio largest N / smallest N", spread.back() / spread.front(),
                                      0.0, c.max_growth));
    r.decide();
    res.reports.push_back(std::move(r));
  }
  res.tables.emplace_back("trends", csv.str());
  res.decide();
  return res;
}

// ------------------------------------------------------------------ six-vertex

namespace {

SampleMatrix sample_gal(const GalInstance& g, const SixVertexConfig& c, bool shifted,
                        std::int64_t trials, std::uint64_t seed, int rep, int side, int threads) {
  double xm = 0.0, ym = 0.0;
  std::vector<std::string> labels;
  for (const auto& p : g.lower) {
    xm = std::max(xm, p.x);
    ym = std::max(ym, p.y + 1.0);
    labels.push_back("H^" + std::to_string(p.m) + "(" + fmt(p.x) + "," + fmt(p.y) + ")");
  }
  for (const auto& p : g.upper) {
    xm = std::max(xm, p.x);
    ym = std::max(ym, p.y);
    labels.push_back("H'^" + std::to_string(p.m) + "(" + fmt(p.x) + "," + fmt(p.y) + ")");
  }
  // a height at (x, y) only depends on vertices below-left of it
  const int x_max = static_cast<int>(std::floor(xm));
  const int y_max = static_cast<int>(std::floor(ym));
  const std::size_t d = labels.size();
  std::vector<double> rows(static_cast<std::size_t>(trials) * d);
  parallel_for(trials, threads, [&](std::int64_t t) {
    const SixVertexSample s = sample_six_vertex(trial_key(seed, rep, t, side), std::max(1, x_max),
                                                std::max(1, y_max), c.b1, c.b2);
    double* row = &rows[static_cast<std::size_t>(t) * d];
    std::size_t k = 0;
    for (const auto& p : g.lower)
      row[k++] = static_cast<double>(shifted ? height_6v(s, p.m + 1, p.x, p.y + 1.0) : height_6v(s, p.m, p.x, p.y));
    for (const auto& p : g.upper) row[k++] = static_cast<double>(height_6v(s, p.m, p.x, p.y));
  });
  SampleMatrix m(labels, seed);
  for (std::int64_t t = 0; t < trials; ++t) m.add_row(std::span<const double>(&rows[static_cast<std::size_t>(t) * d], d));
  return m;
}

}  // namespace

SuiteResult run_suite_sixvertex(const SixVertexConfig& c, const RunOptions& opt) {
  SuiteResult res;
  res.suite = "sixvertex";
  const std::int64_t trials = trials_or(opt, 20000);
  for (std::size_t gi = 0; gi < c.instances.size(); ++gi) {
    const auto& g = c.instances[gi];
    const std::string why = check_gal_instance(g);
    if (!why.empty()) throw ConfigError("sixvertex instance '" + g.name + "': " + why);
    for (int rep = 0; rep < opt.repetitions; ++rep) {
      const int r2 = rep * 64 + static_cast<int>(gi);
      const SampleMatrix a = sample_gal(g, c, false, trials, opt.seed, r2, 0, opt.threads);
      const SampleMatrix b = sample_gal(g, c, true, trials, opt.seed, r2, 1, opt.threads);
      TestReport r;
      r.name = "six-vertex '" + g.name + "' rep " + std::to_string(rep);
      equality_tests(r, a, b, opt, derive_key(rep_seed(opt.seed, r2), 0x6));
      r.notes.push_back("b1=" + fmt(c.b1) + " b2=" + fmt(c.b2));
      r.decide();
      res.reports.push_back(std::move(r));
    }
  }
  if (c.limit) {
    const auto& l = *c.limit;
    std::vector<double> tasep(static_cast<std::size_t>(l.reference_trials));
    parallel_for(l.reference_trials, opt.threads, [&](std::int64_t t) {
      tasep[static_cast<std::size_t>(t)] =
          static_cast<double>(tasep_height(trial_key(opt.seed, 0, t, 0x7A5), l.a, l.b, l.t));
    });
    TestReport r;
    r.name = "six-vertex -> TASEP limit (A=" + std::to_string(l.a) + ", B=" + std::to_string(l.b) +
             ", t=" + fmt(l.t) + ")";
    std::vector<double> dist;
    for (std::size_t e = 0; e < l.eps.size(); ++e) {
      const double eps = l.eps[e];
      const int s = static_cast<int>(std::floor(l.t / eps));
      const double x = s + 0.5, y = s + static_cast<double>(l.b) - 0.5;
      const int x_max = std::max(1, s), y_max = std::max<int>(1, s + static_cast<int>(l.b) - 1);
      std::vector<double> six(static_cast<std::size_t>(l.trials));
      parallel_for(l.trials, opt.threads, [&](std::int64_t t) {
        const SixVertexSample smp =
            sample_six_vertex(trial_key(opt.seed, 1 + static_cast<int>(e), t, 0x7A6), x_max, y_max, eps, 0.0);
        six[static_cast<std::size_t>(t)] =
            static_cast<double>(height_6v(smp, static_cast<int>(l.a) + 1, x, y) + l.a - l.b + 1);
      });
      const KsResult ks = ks_two_sample(six, tasep);
      dist.push_back(ks.statistic);
      r.notes.push_back("eps=" + fmt(eps) + ": KS distance " + fmt(ks.statistic) + ", mean " +
                        fmt(moments(six).mean) + " vs TASEP mean " + fmt(moments(tasep).mean));
    }
    bool decreasing = true;
    for (std::size_t e = 1; e < dist.size(); ++e) decreasing = decreasing && dist[e] < dist[e - 1];
    r.checks.push_back(scalar_check("KS distance decreases as eps shrinks", decreasing ? 1.0 : 0.0, 1.0, 0.0));
    r.decide();
    res.reports.push_back(std::move(r));
  }
  res.decide();
  return res;
}

// ------------------------------------------------------------------ fg

SuiteResult run_suite_fg(const FgConfig& c, const RunOptions& opt) {
  SuiteResult res;
  res.suite = "fg";
  std::ostringstream per_sigma;
  per_sigma << "N,sigma,tableaux,networks,points,equal\n";
  for (int n : c.ns) {
    const FgReport fg = verify_FG_identity(n, c.points, opt.seed, opt.threads);
    TestReport r;
    r.name = "F_sigma = G_sigma N=" + std::to_string(n);
    int failing = 0;
    for (const auto& s : fg.per_sigma) {
      failing += !s.equal;
      per_sigma << n << ",\"";
      for (std::size_t k = 0; k < s.sigma.size(); ++k) per_sigma << (k ? " " : "") << s.sigma[k];
      per_sigma << "\"," << s.tableau_fiber << ',' << s.network_fiber << ',' << s.points_checked << ','
                << (s.equal ? 1 : 0) << '\n';
      if (!s.equal && s.failing_point) {
        std::string pt;
        for (const auto& x : *s.failing_point) pt += (pt.empty() ? "" : ",") + x.get_str();
        std::string sg;
        for (int v : s.sigma) sg += std::to_string(v);
        r.notes.push_back("identity fails for sigma=" + sg + " at x=(" + pt + ")");
      }
    }
    r.checks.push_back(scalar_check("sigmas with F != G", failing, 0.0, 0.0));
    r.checks.push_back(scalar_check("|SYT| - hook length count",
                                    static_cast<double>(fg.tableau_total) - staircase_syt_count(n).get_d(), 0.0, 0.0));
    r.checks.push_back(scalar_check("|SN| - |SYT|",
                                    static_cast<double>(fg.network_total) - static_cast<double>(fg.tableau_total), 0.0, 0.0));
    r.checks.push_back(scalar_check("sum over sigma F = sum over sigma G", fg.sum_identity ? 1.0 : 0.0, 1.0, 0.0));
    r.notes.push_back(std::to_string(fg.per_sigma.size()) + " sigmas, " + std::to_string(fg.points) +
                      " points each, " + fmt(fg.seconds) + " s");
    r.decide();
    res.reports.push_back(std::move(r));
  }
  for (int n = 2; n <= c.eg_max_n; ++n) {
    const EgTable eg = eg_correspondence(n);
    int bad = 0;
    for (const auto& [t, s] : eg.pairs) {
      const auto vt = tableau_vectors(t);
      const auto vs = network_vectors(s);
      bad += vt.last != vs.last || vt.sigma != vs.sigma;
    }
    TestReport r;
    r.name = "Edelman-Greene N=" + std::to_string(n);
    r.checks.push_back(scalar_check("tableaux with la_EG != co or sigma mismatch", bad, 0.0, 0.0));
    r.notes.push_back(std::to_string(eg.pairs.size()) + " pairs");
    if (c.witness && n == 5) {
      const std::vector<ExactRational> ones(4, ExactRational(1));
      const auto w = find_factor_witness(eg, ones);
      r.checks.push_back(scalar_check("per-object factor witness found at x=(1,1,1,1)", w ? 1.0 : 0.0, 1.0, 0.0));
      if (w) {
        r.notes.push_back("witness tableau [" + w->first.serialize() + "] -> word (" + w->second.serialize() +
                          "): " + factor_product(tableau_vectors(w->first), ones).get_str() + " vs " +
                          factor_product(network_vectors(w->second), ones).get_str());
      }
    }
    r.decide();
    res.reports.push_back(std::move(r));
  }
  res.tables.emplace_back("fg_per_sigma", per_sigma.str());
  res.decide();
  return res;
}

// ------------------------------------------------------------------ coupling

SuiteResult run_suite_coupling(const CouplingConfig& c, const RunOptions& opt) {
  SuiteResult res;
  res.suite = "coupling";
  const int n = c.n;
  const std::int64_t seeds = c.seeds;
  std::vector<int> roundtrip_bad(static_cast<std::size_t>(seeds));
  std::vector<double> roundtrip_err(static_cast<std::size_t>(seeds));
  std::vector<int> cbopera_bad(static_cast<std::size_t>(seeds));
  std::vector<int> edge_a_bad(static_cast<std::size_t>(seeds));
  std::vector<int> last_jump_bad(static_cast<std::size_t>(seeds));
  parallel_for(seeds, opt.threads, [&](std::int64_t s) {
    const std::uint64_t key = derive_key(opt.seed, 0xC0, static_cast<std::uint64_t>(s));
    {
      ClockField field(derive_key(key, 1), table_window(c.table_a, c.table_b, c.table_c));
      const PassageTimeTable t = passage_time_table(field, c.table_a, c.table_b, c.table_c);
      roundtrip_bad[static_cast<std::size_t>(s)] = !extraction_roundtrip_exact(t);
      roundtrip_err[static_cast<std::size_t>(s)] = extraction_roundtrip_error(t);
    }
    {
      int bad = 0;
      for (int a = 1; a < n; ++a) {
        ClockField field(derive_key(key, 2, static_cast<std::uint64_t>(a)), {1, 2 * n});
        bad += !check_cbopera(field, n, a, c.horizon);
      }
      cbopera_bad[static_cast<std::size_t>(s)] = bad;
    }
    {
      ClockField field(derive_key(key, 3), {1, n});
      const OspTrajectory traj = simulate_osp(field, n, false);
      std::vector<PassageQuery> q;
      for (int a = 1; a < n; ++a) q.push_back({a, n - a, a});
      const auto t = passage_times(field, q);
      // T^A_{N-A,A} is the last jump of nu^{N,A}, which crosses edge N-A.
      int bad = 0, literal = 0;
      for (int a = 1; a < n; ++a) {
        bad += t[static_cast<std::size_t>(a - 1)] != traj.finishing_time(n - a);
        literal += t[static_cast<std::size_t>(a - 1)] != traj.finishing_time(a);
      }
      last_jump_bad[static_cast<std::size_t>(s)] = bad;
      edge_a_bad[static_cast<std::size_t>(s)] = literal;
    }
  });
  auto count_bad = [](const std::vector<int>& v) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [](int x) { return x != 0; }));
  };
  TestReport r;
  r.name = "per-run couplings N=" + std::to_string(n) + ", " + std::to_string(seeds) + " seeds";
  r.checks.push_back(scalar_check("seeds where the extracted field does not reproduce T^A", count_bad(roundtrip_bad), 0.0, 0.0));
  r.checks.push_back(scalar_check("seeds where B_N R_A mu^A != nu^{N,A} (some A)", count_bad(cbopera_bad), 0.0, 0.0));
  r.checks.push_back(scalar_check("double-route round-trip max relative error", *std::max_element(roundtrip_err.begin(), roundtrip_err.end()), 0.0, 1e-13));
  r.checks.push_back(scalar_check("seeds where last jump of nu^{N,A} != T^A_{N-A,A} (some A)", count_bad(last_jump_bad), 0.0, 0.0));
  r.notes.push_back("seeds where U_N(A) read at edge A differs from T^A_{N-A,A}: " +
                    std::to_string(static_cast<int>(count_bad(edge_a_bad))) + " of " + std::to_string(seeds));
  r.decide();
  res.reports.push_back(std::move(r));
  res.decide();
  return res;
}

TestReport shift_coupling_joint_check(std::int64_t trials, int dim, const RunOptions& opt) {
  std::vector<std::string> labels;
  for (int side = 0; side < 2; ++side)
    for (int b = 1; b <= dim; ++b)
      for (int c = 1; c <= dim; ++c)
        labels.push_back(std::string(side ? "L^1" : "L^0") + "(" + std::to_string(b) + "," + std::to_string(c) + ")");
  const std::size_t d = labels.size();
  std::vector<double> ra(static_cast<std::size_t>(trials) * d), rb(ra.size());
  parallel_for(trials, opt.threads, [&](std::int64_t t) {
    // coupling side: i.i.d. field for A = 0, one extra row and column
    const LppField f = sample_field(trial_key(opt.seed, 0, t, 0), dim + 1, dim + 1);
    const ShiftCouplingState st = shift_couple(f, trial_key(opt.seed, 0, t, 1), dim, dim);
    const PassageTimeTable l0 = passage_table(f);
    double* row = &ra[static_cast<std::size_t>(t) * d];
    std::size_t k = 0;
    for (int b = 1; b <= dim; ++b)
      for (int c = 1; c <= dim; ++c) row[k++] = l0.at(b, c);
    for (int b = 1; b <= dim; ++b)
      for (int c = 1; c <= dim; ++c) row[k++] = st.next_table.at(b, c);
    // oracle side: one shared-clock TASEP run for colors 0 and 1
    std::vector<PassageQuery> q;
    for (int a = 0; a <= 1; ++a)
      for (int b = 1; b <= dim; ++b)
        for (int c = 1; c <= dim; ++c) q.push_back({a, b, c});
    const auto times = sample_passage_times(trial_key(opt.seed, 0, t, 2), q);
    std::copy(times.begin(), times.end(), rb.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(t) * d));
  });
  SampleMatrix a(labels, opt.seed), b(labels, opt.seed);
  for (std::int64_t t = 0; t < trials; ++t) {
    a.add_row(std::span<const double>(&ra[static_cast<std::size_t>(t) * d], d));
    b.add_row(std::span<const double>(&rb[static_cast<std::size_t>(t) * d], d));
  }
  TestReport r;
  r.name = "shift coupling vs shared-clock TASEP (" + std::to_string(dim) + "x" + std::to_string(dim) + ")";
  equality_tests(r, a, b, opt, derive_key(opt.seed, 0x5C));
  r.decide();
  return r;
}

SuiteResult run_suite(const ExperimentConfig& cfg) {
  return std::visit(
      [&](const auto& p) -> SuiteResult {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ShiftDeConfig>) return run_suite_shift_de(p, cfg.run);
        else if constexpr (std::is_same_v<T, ShiftSaConfig>) return run_suite_shift_sa(p, cfg.run);
        else if constexpr (std::is_same_v<T, OspLppConfig>) return run_suite_osp_lpp(p, cfg.run);
        else if constexpr (std::is_same_v<T, AsymptoticsConfig>) return run_suite_asymptotics(p, cfg.run);
        else if constexpr (std::is_same_v<T, SixVertexConfig>) return run_suite_sixvertex(p, cfg.run);
        else if constexpr (std::is_same_v<T, FgConfig>) return run_suite_fg(p, cfg.run);
        else return run_suite_coupling(p, cfg.run);
      },
      cfg.params);
}

}  // namespace swaplab
