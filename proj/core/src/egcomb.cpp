#include "swaplab/egcomb.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "swaplab/errors.hpp"
#include "swaplab/rng.hpp"

namespace swaplab {

ExactRational make_rational(long num, long den) {
  if (den == 0) throw EvaluationError("zero denominator");
  ExactRational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

void check_n(int n, int hi, const char* what) {
  if (n < 2) throw DomainError(std::string(what) + ": N must be at least 2");
  if (n > hi) throw ResourceError(std::string(what) + ": N=" + std::to_string(n) +
                                  " exceeds the bound N<=" + std::to_string(hi));
}

// Offset of row i (1-based) in row-major staircase storage.
int row_offset(int n, int i) {
  // rows 1..i-1 have lengths n-1, ..., n-i+1
  return (i - 1) * n - (i - 1) * i / 2;
}

Permutation ranking(const std::vector<int>& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  Permutation sigma(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && values[order[r]] == values[order[r - 1]])
      throw InvariantError("ranking of a vector with repeated entries");
    sigma[order[r]] = static_cast<int>(r) + 1;
  }
  return sigma;
}

// sorted(k) = last(sigma^{-1}(k)); asserted strictly increasing.
std::vector<int> compose_inverse(const std::vector<int>& last, const Permutation& sigma) {
  std::vector<int> sorted(last.size());
  for (std::size_t i = 0; i < last.size(); ++i) sorted[sigma[i] - 1] = last[i];
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k] <= sorted[k - 1]) throw InvariantError("rearrangement is not increasing");
  return sorted;
}

}  // namespace

// ---------------------------------------------------------------- tableaux

StaircaseTableau::StaircaseTableau(int n, std::vector<int> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 2) throw DomainError("staircase tableau needs N >= 2");
  const int m = staircase_size(n);
  if (static_cast<int>(entries_.size()) != m)
    throw InvariantError("staircase tableau has wrong number of entries");
  std::vector<char> seen(m + 1, 0);
  for (int v : entries_) {
    if (v < 1 || v > m || seen[v]) throw InvariantError("tableau entries are not 1..N(N-1)/2");
    seen[v] = 1;
  }
  for (int i = 1; i < n; ++i)
    for (int j = 1; i + j <= n; ++j) {
      if (j + 1 + i <= n && at(i, j) >= at(i, j + 1))
        throw InvariantError("tableau row not increasing");
      if (i + 1 + j <= n && at(i, j) >= at(i + 1, j))
        throw InvariantError("tableau column not increasing");
    }
}

int StaircaseTableau::at(int i, int j) const {
  if (i < 1 || j < 1 || i + j > n_) throw DomainError("cell outside the staircase");
  return entries_[row_offset(n_, i) + j - 1];
}

std::vector<std::vector<int>> StaircaseTableau::rows() const {
  std::vector<std::vector<int>> out;
  for (int i = 1; i < n_; ++i) {
    const int off = row_offset(n_, i);
    out.emplace_back(entries_.begin() + off, entries_.begin() + off + (n_ - i));
  }
  return out;
}

std::string StaircaseTableau::serialize() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < entries_.size(); ++k) os << (k ? " " : "") << entries_[k];
  return os.str();
}

// ---------------------------------------------------------------- networks

SortingNetworkWord::SortingNetworkWord(int n, std::vector<int> letters)
    : n_(n), letters_(std::move(letters)) {
  if (n < 2) throw DomainError("sorting network needs N >= 2");
  if (static_cast<int>(letters_.size()) != staircase_size(n))
    throw InvariantError("sorting network has wrong length");
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  for (int s : letters_) {
    if (s < 1 || s >= n) throw InvariantError("sorting network letter out of range");
    if (v[s - 1] > v[s]) throw InvariantError("sorting network swaps a descent");
    std::swap(v[s - 1], v[s]);
  }
}

std::string SortingNetworkWord::serialize() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < letters_.size(); ++k) os << (k ? "," : "") << letters_[k];
  return os.str();
}

// ---------------------------------------------------------------- vectors

FiberVectors tableau_vectors(const StaircaseTableau& lambda) {
  const int n = lambda.n();
  const int m = staircase_size(n);
  FiberVectors v;
  v.source = FiberVectors::Source::Tableau;
  v.last.resize(n - 1);
  for (int k = 1; k < n; ++k) v.last[k - 1] = lambda.at(n - k, k);
  v.sigma = ranking(v.last);
  v.sorted_last = compose_inverse(v.last, v.sigma);

  // Grow the shape entry by entry; count addable boxes of delta_N before each step.
  std::vector<int> cell_row(m + 1);
  for (int i = 1; i < n; ++i)
    for (int j = 1; i + j <= n; ++j) cell_row[lambda.at(i, j)] = i;
  std::vector<int> len(n + 1, 0);  // len[0] is a sentinel, rows 1..n-1
  len[0] = n;
  v.de.resize(m);
  for (int k = 0; k < m; ++k) {
    int addable = 0;
    for (int i = 1; i < n; ++i)
      if (len[i] < n - i && len[i - 1] > len[i]) ++addable;
    v.de[k] = addable;
    ++len[cell_row[k + 1]];
  }
  return v;
}

FiberVectors network_vectors(const SortingNetworkWord& s) {
  const int n = s.n();
  const int m = staircase_size(n);
  FiberVectors v;
  v.source = FiberVectors::Source::Network;
  v.last.assign(n - 1, 0);
  const auto letters = s.letters();
  for (int i = 0; i < m; ++i) v.last[letters[i] - 1] = i + 1;
  v.sigma = ranking(v.last);
  v.sorted_last = compose_inverse(v.last, v.sigma);

  std::vector<int> conf(n);
  std::iota(conf.begin(), conf.end(), 1);
  v.de.resize(m);
  int ascents = n - 1;
  for (int k = 0; k < m; ++k) {
    v.de[k] = ascents;
    const int e = letters[k] - 1;
    // swapping an ascent at e changes the ascent status of e-1, e and e+1
    auto asc = [&](int p) { return p >= 0 && p + 1 < n && conf[p] < conf[p + 1]; };
    ascents -= asc(e - 1) + asc(e) + asc(e + 1);
    std::swap(conf[e], conf[e + 1]);
    ascents += asc(e - 1) + asc(e) + asc(e + 1);
  }
  return v;
}

std::vector<std::uint8_t> factor_exponents(const FiberVectors& v, int n) {
  const int w = n - 1;
  std::vector<std::uint8_t> e(static_cast<std::size_t>(w) * w, 0);
  int prev = 0;
  for (int k = 1; k <= w; ++k) {
    for (int i = prev + 1; i <= v.sorted_last[k - 1]; ++i) {
      const int d = v.de[i - 1];
      if (d < 1 || d > w) throw InvariantError("de entry outside 1..N-1");
      ++e[(k - 1) * w + (d - 1)];
    }
    prev = v.sorted_last[k - 1];
  }
  if (prev != staircase_size(n)) throw InvariantError("last interval does not end at N(N-1)/2");
  return e;
}

ExactRational factor_product(const FiberVectors& v, std::span<const ExactRational> x) {
  const int n = static_cast<int>(v.last.size()) + 1;
  if (static_cast<int>(x.size()) != n - 1) throw DomainError("point has wrong dimension");
  FiberIndex::SignatureCounts one;
  one[factor_exponents(v, n)] = 1;
  return evaluate_signatures(one, n, x);
}

// ---------------------------------------------------------------- enumeration

void for_each_syt(int n, const std::function<void(const StaircaseTableau&)>& visit) {
  check_n(n, kEnumerationMaxN, "for_each_syt");
  const int m = staircase_size(n);
  std::vector<int> len(n, 0);
  len[0] = n;  // sentinel row 0
  std::vector<int> entries(m, 0);
  // Place entry k into any addable corner, depth first.
  std::function<void(int)> rec = [&](int k) {
    if (k > m) {
      visit(StaircaseTableau(n, entries));
      return;
    }
    for (int i = 1; i < n; ++i) {
      if (len[i] < n - i && len[i - 1] > len[i]) {
        entries[row_offset(n, i) + len[i]] = k;
        ++len[i];
        rec(k + 1);
        --len[i];
      }
    }
  };
  rec(1);
}

void for_each_network(int n, const std::function<void(const SortingNetworkWord&)>& visit) {
  check_n(n, kEnumerationMaxN, "for_each_network");
  const int m = staircase_size(n);
  std::vector<int> conf(n);
  std::iota(conf.begin(), conf.end(), 1);
  std::vector<int> word;
  word.reserve(m);
  std::function<void()> rec = [&]() {
    if (static_cast<int>(word.size()) == m) {
      visit(SortingNetworkWord(n, word));
      return;
    }
    for (int e = 0; e + 1 < n; ++e) {
      if (conf[e] < conf[e + 1]) {
        std::swap(conf[e], conf[e + 1]);
        word.push_back(e + 1);
        rec();
        word.pop_back();
        std::swap(conf[e], conf[e + 1]);
      }
    }
  };
  rec();
}

std::vector<StaircaseTableau> enumerate_syt(int n) {
  check_n(n, kMaterializeMaxN, "enumerate_syt");
  std::vector<StaircaseTableau> out;
  for_each_syt(n, [&](const StaircaseTableau& t) { out.push_back(t); });
  return out;
}

std::vector<SortingNetworkWord> enumerate_networks(int n) {
  check_n(n, kMaterializeMaxN, "enumerate_networks");
  std::vector<SortingNetworkWord> out;
  for_each_network(n, [&](const SortingNetworkWord& s) { out.push_back(s); });
  return out;
}

mpz_class hook_length_count(std::span<const int> row_lengths) {
  int total = 0;
  for (std::size_t i = 0; i < row_lengths.size(); ++i) {
    if (row_lengths[i] < 0 || (i > 0 && row_lengths[i] > row_lengths[i - 1]))
      throw DomainError("row lengths must form a partition");
    total += row_lengths[i];
  }
  mpz_class num;
  mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(total));
  mpz_class hooks = 1;
  for (std::size_t i = 0; i < row_lengths.size(); ++i)
    for (int j = 0; j < row_lengths[i]; ++j) {
      int below = 0;
      for (std::size_t r = i + 1; r < row_lengths.size() && row_lengths[r] > j; ++r) ++below;
      hooks *= (row_lengths[i] - j - 1) + below + 1;
    }
  return num / hooks;
}

mpz_class staircase_syt_count(int n) {
  std::vector<int> rows;
  for (int i = n - 1; i >= 1; --i) rows.push_back(i);
  return hook_length_count(rows);
}

std::vector<Permutation> all_permutations(int m) {
  Permutation p(m);
  std::iota(p.begin(), p.end(), 1);
  std::vector<Permutation> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// ---------------------------------------------------------------- F and G

std::size_t FiberIndex::index_of(const Permutation& sigma) const {
  auto it = std::lower_bound(perms.begin(), perms.end(), sigma);
  if (it == perms.end() || *it != sigma)
    throw DomainError("sigma is not a permutation of 1..N-1");
  return static_cast<std::size_t>(it - perms.begin());
}

namespace {

FiberIndex build_fiber_index(int n) {
  FiberIndex idx;
  idx.n = n;
  idx.perms = all_permutations(n - 1);
  const std::size_t np = idx.perms.size();
  idx.tableau_side.resize(np);
  idx.network_side.resize(np);
  idx.tableau_fiber_size.assign(np, 0);
  idx.network_fiber_size.assign(np, 0);
  for_each_syt(n, [&](const StaircaseTableau& t) {
    const FiberVectors v = tableau_vectors(t);
    const std::size_t s = idx.index_of(v.sigma);
    ++idx.tableau_side[s][factor_exponents(v, n)];
    ++idx.tableau_fiber_size[s];
  });
  for_each_network(n, [&](const SortingNetworkWord& w) {
    const FiberVectors v = network_vectors(w);
    const std::size_t s = idx.index_of(v.sigma);
    ++idx.network_side[s][factor_exponents(v, n)];
    ++idx.network_fiber_size[s];
  });
  return idx;
}

}  // namespace

const FiberIndex& fiber_index(int n) {
  check_n(n, kMaterializeMaxN, "fiber_index");
  static std::mutex mu;
  static std::array<std::unique_ptr<FiberIndex>, kMaterializeMaxN + 1> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[n]) cache[n] = std::make_unique<FiberIndex>(build_fiber_index(n));
  return *cache[n];
}

ExactRational evaluate_signatures(const FiberIndex::SignatureCounts& table, int n,
                                  std::span<const ExactRational> x) {
  const int w = n - 1;
  if (static_cast<int>(x.size()) != w) throw DomainError("point has wrong dimension");
  if (table.empty()) return ExactRational(0);

  // x_k = p_k / q_k, so 1/(x_k + d) = q_k / (p_k + d q_k). Everything is put
  // over the common denominator prod (p_k + d q_k)^{E_{k,d}}, E = max exponent.
  std::vector<mpz_class> a(static_cast<std::size_t>(w) * w);
  for (int k = 0; k < w; ++k) {
    const mpz_class& p = x[k].get_num();
    const mpz_class& q = x[k].get_den();
    for (int d = 1; d <= w; ++d) {
      a[k * w + d - 1] = p + d * q;
      if (a[k * w + d - 1] == 0)
        throw EvaluationError("zero denominator: x_" + std::to_string(k + 1) + " + " +
                              std::to_string(d) + " = 0");
    }
  }
  std::vector<int> top(a.size(), 0);
  for (const auto& [sig, count] : table)
    for (std::size_t c = 0; c < sig.size(); ++c) top[c] = std::max<int>(top[c], sig[c]);

  // Power tables a^0..a^top and q_k^0..q_k^{N(N-1)/2}.
  std::vector<std::vector<mpz_class>> apow(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) {
    apow[c].resize(top[c] + 1);
    apow[c][0] = 1;
    for (int e = 1; e <= top[c]; ++e) apow[c][e] = apow[c][e - 1] * a[c];
  }
  const int m = staircase_size(n);
  std::vector<std::vector<mpz_class>> qpow(w, std::vector<mpz_class>(m + 1));
  for (int k = 0; k < w; ++k) {
    qpow[k][0] = 1;
    for (int e = 1; e <= m; ++e) qpow[k][e] = qpow[k][e - 1] * x[k].get_den();
  }

  mpz_class numerator = 0;
  mpz_class term;
  for (const auto& [sig, count] : table) {
    term = static_cast<unsigned long>(count);
    for (int k = 0; k < w; ++k) {
      int len = 0;
      for (int d = 0; d < w; ++d) {
        const std::size_t c = k * w + d;
        len += sig[c];
        if (top[c] != sig[c]) term *= apow[c][top[c] - sig[c]];
      }
      if (len > 0) term *= qpow[k][len];
    }
    numerator += term;
  }
  mpz_class denominator = 1;
  for (std::size_t c = 0; c < a.size(); ++c)
    if (top[c] > 0) denominator *= apow[c][top[c]];
  ExactRational out(numerator, denominator);
  out.canonicalize();
  return out;
}

ExactRational eval_F(int n, const Permutation& sigma, std::span<const ExactRational> x) {
  const FiberIndex& idx = fiber_index(n);
  return evaluate_signatures(idx.tableau_side[idx.index_of(sigma)], n, x);
}

ExactRational eval_G(int n, const Permutation& sigma, std::span<const ExactRational> x) {
  const FiberIndex& idx = fiber_index(n);
  return evaluate_signatures(idx.network_side[idx.index_of(sigma)], n, x);
}

FgReport verify_FG_identity(int n, int num_points, std::uint64_t seed, int threads) {
  check_n(n, kMaterializeMaxN, "verify_FG_identity");
  if (num_points < 1) throw ConfigError("verify_FG_identity: need at least one point");
  const auto start = std::chrono::steady_clock::now();
  const FiberIndex& idx = fiber_index(n);
  const int w = n - 1;

  std::vector<std::vector<ExactRational>> points(num_points, std::vector<ExactRational>(w));
  CounterRng rng(derive_key(seed, 0xF6));
  constexpr std::uint64_t lo = 10000, hi = 1000000000;
  for (auto& p : points)
    for (auto& c : p) c = ExactRational(static_cast<unsigned long>(lo + rng.below(hi - lo + 1)));

  FgReport rep;
  rep.n = n;
  rep.points = num_points;
  const std::size_t np = idx.perms.size();
  rep.per_sigma.resize(np);
  std::vector<std::vector<ExactRational>> f_vals(np, std::vector<ExactRational>(num_points));
  std::vector<std::vector<ExactRational>> g_vals = f_vals;

  auto work = [&](std::size_t s) {
    FgSigmaResult& r = rep.per_sigma[s];
    r.sigma = idx.perms[s];
    r.tableau_fiber = idx.tableau_fiber_size[s];
    r.network_fiber = idx.network_fiber_size[s];
    r.equal = r.tableau_fiber == r.network_fiber;
    for (int p = 0; p < num_points; ++p) {
      f_vals[s][p] = evaluate_signatures(idx.tableau_side[s], n, points[p]);
      g_vals[s][p] = evaluate_signatures(idx.network_side[s], n, points[p]);
      ++r.points_checked;
      if (f_vals[s][p] != g_vals[s][p] && r.equal) {
        r.equal = false;
        r.failing_point = points[p];
      }
    }
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(np)));
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t s = t; s < np; s += nt) work(s);
    });
  for (auto& th : pool) th.join();

  for (int p = 0; p < num_points; ++p) {
    ExactRational fs = 0, gs = 0;
    for (std::size_t s = 0; s < np; ++s) {
      fs += f_vals[s][p];
      gs += g_vals[s][p];
    }
    if (fs != gs) rep.sum_identity = false;
  }
  rep.pass = rep.sum_identity;
  for (const auto& r : rep.per_sigma) {
    rep.tableau_total += r.tableau_fiber;
    rep.network_total += r.network_fiber;
    rep.pass = rep.pass && r.equal;
  }
  rep.pass = rep.pass && rep.tableau_total == rep.network_total &&
             mpz_class(static_cast<unsigned long>(rep.tableau_total)) == staircase_syt_count(n);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------- Edelman-Greene

EgInsertion edelman_greene_insert(const SortingNetworkWord& s) {
  EgInsertion out;
  auto& P = out.insertion;
  auto& Q = out.recording;
  int step = 0;
  for (int letter : s.letters()) {
    ++step;
    int x = letter;
    std::size_t r = 0;
    for (;; ++r) {
      if (r == P.size()) {
        P.push_back({x});
        Q.push_back({step});
        break;
      }
      auto& row = P[r];
      auto it = std::upper_bound(row.begin(), row.end(), x);
      if (it == row.end()) {
        row.push_back(x);
        Q[r].push_back(step);
        break;
      }
      const int y = *it;
      if (y == x + 1 && it != row.begin() && *(it - 1) == x) {
        x = x + 1;  // row unchanged, x+1 bumped
      } else {
        if (it != row.begin() && *(it - 1) == x)
          throw InvariantError("Edelman-Greene insertion met a non-reduced word");
        *it = x;
        x = y;
      }
    }
  }
  return out;
}

const SortingNetworkWord& EgTable::operator()(const StaircaseTableau& lambda) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), lambda,
                             [](const auto& p, const StaircaseTableau& t) { return p.first < t; });
  if (it == pairs.end() || it->first != lambda) throw DomainError("tableau not in the table");
  return it->second;
}

std::string EgTable::to_csv() const {
  std::ostringstream os;
  os << "tableau,word\n";
  for (const auto& [t, s] : pairs) os << '"' << t.serialize() << "\",\"" << s.serialize() << "\"\n";
  return os.str();
}

EgTable eg_correspondence(int n) {
  check_n(n, kMaterializeMaxN, "eg_correspondence");
  EgTable table;
  table.n = n;
  for_each_network(n, [&](const SortingNetworkWord& s) {
    const EgInsertion ins = edelman_greene_insert(s);
    if (static_cast<int>(ins.recording.size()) != n - 1)
      throw InvariantError("recording tableau is not staircase-shaped");
    std::vector<int> entries;
    for (int i = 0; i < n - 1; ++i) {
      if (static_cast<int>(ins.recording[i].size()) != n - 1 - i)
        throw InvariantError("recording tableau is not staircase-shaped");
      entries.insert(entries.end(), ins.recording[i].begin(), ins.recording[i].end());
    }
    table.pairs.emplace_back(StaircaseTableau(n, std::move(entries)), s);
  });
  std::sort(table.pairs.begin(), table.pairs.end());
  for (std::size_t k = 1; k < table.pairs.size(); ++k)
    if (table.pairs[k].first == table.pairs[k - 1].first)
      throw InvariantError("word -> recording tableau map is not injective");
  if (mpz_class(static_cast<unsigned long>(table.pairs.size())) != staircase_syt_count(n))
    throw InvariantError("word -> recording tableau map is not surjective");
  return table;
}

std::optional<std::pair<StaircaseTableau, SortingNetworkWord>> find_factor_witness(
    const EgTable& table, std::span<const ExactRational> x) {
  for (const auto& [t, s] : table.pairs)
    if (factor_product(tableau_vectors(t), x) != factor_product(network_vectors(s), x))
      return std::make_pair(t, s);
  return std::nullopt;
}

}  // namespace swaplab
