#include "swaplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "swaplab/errors.hpp"
#include "swaplab/rng.hpp"

namespace swaplab {

SampleMatrix::SampleMatrix(std::vector<std::string> labels, std::uint64_t seed)
    : labels_(std::move(labels)), seed_(seed) {
  if (labels_.empty()) throw ConfigError("sample matrix needs at least one dimension");
}

void SampleMatrix::add_row(std::span<const double> row) {
  if (row.size() != dim()) throw DomainError("row dimension mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
}

std::span<const double> SampleMatrix::row(std::size_t i) const {
  return std::span<const double>(data_).subspan(i * dim(), dim());
}

std::vector<double> SampleMatrix::column(std::size_t j) const {
  std::vector<double> c(trials());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = at(i, j);
  return c;
}

SampleMatrix SampleMatrix::select(std::span<const std::size_t> dims) const {
  std::vector<std::string> labels;
  for (auto d : dims) labels.push_back(labels_.at(d));
  SampleMatrix out(std::move(labels), seed_);
  std::vector<double> r(dims.size());
  for (std::size_t i = 0; i < trials(); ++i) {
    for (std::size_t k = 0; k < dims.size(); ++k) r[k] = at(i, dims[k]);
    out.add_row(r);
  }
  return out;
}

std::string SampleMatrix::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "trial";
  for (const auto& l : labels_) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < trials(); ++i) {
    os << i;
    for (std::size_t j = 0; j < dim(); ++j) os << ',' << at(i, j);
    os << '\n';
  }
  return os.str();
}

Moments moments(std::span<const double> x) {
  Moments m;
  m.n = x.size();
  if (x.empty()) return m;
  // Welford
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : x) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  m.mean = mean;
  if (m.n > 1) {
    m.variance = m2 / static_cast<double>(m.n - 1);
    m.std_error = std::sqrt(m.variance / static_cast<double>(m.n));
  }
  return m;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // P[K <= lambda] = sqrt(2 pi)/lambda * sum_j exp(-(2j-1)^2 pi^2 / (8 lambda^2))
    const double pi = 3.14159265358979323846;
    const double w = pi * pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double term = std::exp(-(2.0 * j - 1) * (2.0 * j - 1) * w);
      s += term;
      if (term < 1e-300) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    s += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double en) {
  return kolmogorov_sf((en + 0.12 + 0.11 / en) * d);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  r.n_a = x.size();
  r.n_b = y.size();
  r.p_value = d == 0.0 ? 1.0 : ks_p_value(d, std::sqrt(na * nb / (na + nb)));
  return r;
}

KsResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw DomainError("ks_one_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  KsResult r;
  r.statistic = d;
  r.n_a = x.size();
  r.p_value = ks_p_value(d, std::sqrt(n));
  return r;
}

EnergyResult energy_permutation_test(const SampleMatrix& a, const SampleMatrix& b,
                                     int permutations, std::uint64_t seed,
                                     std::size_t max_per_group) {
  if (a.dim() != b.dim()) throw DomainError("energy test: dimension mismatch");
  if (a.trials() < 2 || b.trials() < 2) throw DomainError("energy test: need >= 2 trials per group");
  if (permutations < 1) throw ConfigError("energy test: permutations must be positive");
  if (max_per_group < 2) throw ConfigError("energy test: group cap must be >= 2");

  CounterRng rng(derive_key(seed, 0xE4E));
  auto pick = [&](std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (n > max_per_group) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(max_per_group);
      std::sort(idx.begin(), idx.end());
    }
    return idx;
  };
  const auto ia = pick(a.trials());
  const auto ib = pick(b.trials());
  const std::size_t na = ia.size(), nb = ib.size(), n = na + nb, d = a.dim();

  // Pooled, per-dimension standardized coordinates.
  std::vector<double> z(n * d);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k < d; ++k) z[i * d + k] = a.at(ia[i], k);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t k = 0; k < d; ++k) z[(na + i) * d + k] = b.at(ib[i], k);
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += z[i * d + k];
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) sq += (z[i * d + k] - mean) * (z[i * d + k] - mean);
    const double sd = std::sqrt(sq / static_cast<double>(n - 1));
    const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
    for (std::size_t i = 0; i < n; ++i) z[i * d + k] *= scale;
  }

  std::vector<float> dist(n * n, 0.0f);
  std::vector<double> rowsum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double t = z[i * d + k] - z[j * d + k];
        s += t * t;
      }
      dist[i * n + j] = dist[j * n + i] = static_cast<float>(std::sqrt(s));
    }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += dist[i * n + j];
    rowsum[i] = s;
  }
  const double total = std::accumulate(rowsum.begin(), rowsum.end(), 0.0);
  const double fa = static_cast<double>(na), fb = static_cast<double>(nb);

  // With mask m (1 on group A): sum_AA = m'Dm, sum_AB = R'm - m'Dm,
  // sum_BB = total - 2 R'm + m'Dm.
  std::vector<float> mask(n);
  auto stat = [&](const std::vector<std::size_t>& members) {
    std::fill(mask.begin(), mask.end(), 0.0f);
    double rm = 0.0;
    for (auto i : members) {
      mask[i] = 1.0f;
      rm += rowsum[i];
    }
    double q = 0.0;
    for (auto i : members) {
      const float* row = &dist[i * n];
      float s = 0.0f;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * mask[j];
      q += s;
    }
    const double s_aa = q, s_ab = rm - q, s_bb = total - 2.0 * rm + q;
    const double e = 2.0 * s_ab / (fa * fb) - s_aa / (fa * fa) - s_bb / (fb * fb);
    return e * fa * fb / (fa + fb);
  };

  std::vector<std::size_t> members(na);
  std::iota(members.begin(), members.end(), 0);
  const double observed = stat(members);

  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  int exceed = 0;
  for (int p = 0; p < permutations; ++p) {
    // partial Fisher-Yates: first na entries form the permuted group A
    for (std::size_t i = 0; i < na; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(labels[i], labels[j]);
    }
    members.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(na));
    std::sort(members.begin(), members.end());
    if (stat(members) >= observed * (1.0 - 1e-9)) ++exceed;
  }

  EnergyResult r;
  r.statistic = observed;
  r.permutations = permutations;
  r.p_value = (1.0 + exceed) / (permutations + 1.0);
  r.n_a = na;
  r.n_b = nb;
  r.subsampled = na < a.trials() || nb < b.trials();
  return r;
}

ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> counts_a,
                                      std::span<const std::uint64_t> counts_b,
                                      std::uint64_t min_pooled) {
  if (counts_a.size() != counts_b.size()) throw DomainError("chi-square: table shape mismatch");
  std::vector<std::pair<double, double>> cells;
  std::pair<double, double> rest{0.0, 0.0};
  for (std::size_t k = 0; k < counts_a.size(); ++k) {
    const auto pooled = counts_a[k] + counts_b[k];
    if (pooled == 0) continue;
    if (pooled < min_pooled) {
      rest.first += static_cast<double>(counts_a[k]);
      rest.second += static_cast<double>(counts_b[k]);
    } else {
      cells.emplace_back(static_cast<double>(counts_a[k]), static_cast<double>(counts_b[k]));
    }
  }
  if (rest.first + rest.second > 0.0) cells.push_back(rest);
  ChiSquareResult r;
  r.cells_used = static_cast<int>(cells.size());
  double ta = 0.0, tb = 0.0;
  for (auto& [x, y] : cells) {
    ta += x;
    tb += y;
  }
  if (cells.size() < 2 || ta == 0.0 || tb == 0.0) return r;
  const double t = ta + tb;
  for (auto& [x, y] : cells) {
    const double col = x + y;
    const double ea = col * ta / t, eb = col * tb / t;
    r.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  r.dof = static_cast<int>(cells.size()) - 1;
  r.p_value = r.statistic > 0.0 ? boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0) : 1.0;
  return r;
}

ChiSquareResult chi_square_categorical(std::span<const std::string> a,
                                       std::span<const std::string> b,
                                       std::uint64_t min_pooled) {
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> table;
  for (const auto& s : a) ++table[s].first;
  for (const auto& s : b) ++table[s].second;
  std::vector<std::uint64_t> ca, cb;
  for (const auto& [k, v] : table) {
    ca.push_back(v.first);
    cb.push_back(v.second);
  }
  return chi_square_two_sample(ca, cb, min_pooled);
}

std::vector<double> holm_adjust(std::span<const double> p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return p[i] < p[j]; });
  std::vector<double> adj(m);
  double running = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    running = std::max(running, std::min(1.0, static_cast<double>(m - r) * p[order[r]]));
    adj[order[r]] = running;
  }
  return adj;
}

IncrementLaw::IncrementLaw(double y_) : y(y_) {
  if (!(y > 0.0 && y < 1.0)) throw ConfigError("increment law needs y in (0,1)");
}

double IncrementLaw::prefactor() const {
  const double g = std::sqrt(y * (1.0 - y));
  return g / (1.0 + 2.0 * g);
}
double IncrementLaw::right_rate() const {
  return std::sqrt(y) / (std::sqrt(y) + std::sqrt(1.0 - y));
}
double IncrementLaw::left_rate() const {
  return std::sqrt(1.0 - y) / (std::sqrt(y) + std::sqrt(1.0 - y));
}
double IncrementLaw::density(double t) const {
  return t >= 0.0 ? prefactor() * std::exp(-right_rate() * t)
                  : prefactor() * std::exp(left_rate() * t);
}
double IncrementLaw::cdf(double t) const {
  if (t < 0.0) return left_mass() * std::exp(left_rate() * t);
  return left_mass() + right_mass() * (-std::expm1(-right_rate() * t));
}
double IncrementLaw::mean() const {
  const double c = prefactor(), r = right_rate(), l = left_rate();
  return c / (r * r) - c / (l * l);
}
double IncrementLaw::variance() const {
  const double c = prefactor(), r = right_rate(), l = left_rate();
  const double second = 2.0 * c / (r * r * r) + 2.0 * c / (l * l * l);
  return second - mean() * mean();
}

std::vector<double> sample_increment_law(const IncrementLaw& law, std::size_t n, std::uint64_t seed) {
  CounterRng rng(derive_key(seed, 0x1AC));
  const double pr = law.right_mass();
  std::vector<double> out(n);
  for (auto& v : out) {
    const bool right = rng.uniform() < pr;
    const double e = rng.exponential();
    v = right ? e / law.right_rate() : -e / law.left_rate();
  }
  return out;
}

// ------------------------------------------------------------------ reports

std::vector<MarginalTest> marginal_tests(const SampleMatrix& a, const SampleMatrix& b) {
  if (a.labels() != b.labels()) throw DomainError("marginal tests: label mismatch");
  std::vector<MarginalTest> out;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const auto ca = a.column(j), cb = b.column(j);
    MarginalTest m;
    m.label = a.labels()[j];
    m.ks = ks_two_sample(ca, cb);
    m.a = moments(ca);
    m.b = moments(cb);
    out.push_back(std::move(m));
  }
  return out;
}

ScalarCheck scalar_check(std::string label, double value, double expected, double tolerance) {
  ScalarCheck c;
  c.label = std::move(label);
  c.value = value;
  c.expected = expected;
  c.tolerance = tolerance;
  c.pass = std::abs(value - expected) <= tolerance;
  return c;
}

void TestReport::decide() {
  std::vector<double> ps;
  for (const auto& m : marginals) ps.push_back(m.ks.p_value);
  const auto adj = holm_adjust(ps);
  for (std::size_t k = 0; k < marginals.size(); ++k) marginals[k].holm_p = adj[k];

  std::vector<double> all = ps;
  if (energy) all.push_back(energy->p_value);
  for (const auto& c : chi_square) all.push_back(c.result.p_value);

  bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  if (expect_equal) {
    ok = ok && std::all_of(all.begin(), all.end(), [&](double p) { return p > alpha; });
  } else {
    ok = ok && std::any_of(all.begin(), all.end(), [&](double p) { return p < alpha; });
  }
  pass = ok;
}

namespace {

nlohmann::json moments_json(const Moments& m) {
  return {{"n", m.n}, {"mean", m.mean}, {"variance", m.variance}, {"std_error", m.std_error}};
}

}  // namespace

std::string TestReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["expect"] = expect_equal ? "equal" : "differ";
  j["alpha"] = alpha;
  j["pass"] = pass;
  auto& ms = j["marginals"] = nlohmann::ordered_json::array();
  for (const auto& m : marginals)
    ms.push_back({{"label", m.label},
                  {"ks_statistic", m.ks.statistic},
                  {"p_value", m.ks.p_value},
                  {"holm_p", m.holm_p},
                  {"a", moments_json(m.a)},
                  {"b", moments_json(m.b)}});
  if (energy)
    j["energy"] = {{"statistic", energy->statistic},
                   {"p_value", energy->p_value},
                   {"permutations", energy->permutations},
                   {"n_a", energy->n_a},
                   {"n_b", energy->n_b},
                   {"subsampled", energy->subsampled}};
  auto& cs = j["chi_square"] = nlohmann::ordered_json::array();
  for (const auto& c : chi_square)
    cs.push_back({{"label", c.label},
                  {"statistic", c.result.statistic},
                  {"dof", c.result.dof},
                  {"p_value", c.result.p_value},
                  {"cells", c.result.cells_used}});
  auto& ck = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    ck.push_back({{"label", c.label},
                  {"value", c.value},
                  {"expected", c.expected},
                  {"tolerance", c.tolerance},
                  {"pass", c.pass}});
  j["notes"] = notes;
  return j.dump(2);
}

}  // namespace swaplab
