#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "swaplab/egcomb.hpp"
#include "swaplab/errors.hpp"

using namespace swaplab;

namespace {

// Hook-length formula for the staircase, written out directly.
mpz_class staircase_hook(int n) {
  const int m = n * (n - 1) / 2;
  mpz_class num = 1, den = 1;
  for (int k = 2; k <= m; ++k) num *= k;
  for (int i = 1; i < n; ++i)
    for (int j = 1; i + j <= n; ++j) {
      const int arm = (n - i) - j, leg = (n - j) - i;
      den *= arm + leg + 1;
    }
  return num / den;
}

std::vector<int> naive_de_network(const SortingNetworkWord& s) {
  const int n = s.n();
  std::vector<int> v(n), out;
  std::iota(v.begin(), v.end(), 1);
  for (int letter : s.letters()) {
    int asc = 0;
    for (int i = 0; i + 1 < n; ++i) asc += v[i] < v[i + 1];
    out.push_back(asc);
    std::swap(v[letter - 1], v[letter]);
  }
  return out;
}

std::vector<int> naive_de_tableau(const StaircaseTableau& t) {
  const int n = t.n(), m = staircase_size(n);
  std::vector<int> out;
  for (int k = 0; k < m; ++k) {
    auto in = [&](int i, int j) { return i >= 1 && j >= 1 && i + j <= n && t.at(i, j) <= k; };
    int addable = 0;
    for (int i = 1; i < n; ++i)
      for (int j = 1; i + j <= n; ++j)
        if (!in(i, j) && (i == 1 || in(i - 1, j)) && (j == 1 || in(i, j - 1))) ++addable;
    out.push_back(addable);
  }
  return out;
}

Permutation ranking_of(const std::vector<int>& v) {
  Permutation s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    s[i] = 1 + static_cast<int>(std::count_if(v.begin(), v.end(), [&](int x) { return x < v[i]; }));
  return s;
}

// prod_k prod_{i = sorted(k-1)+1}^{sorted(k)} 1/(x_k + de(i-1))
mpq_class naive_product(const std::vector<int>& last, const std::vector<int>& de, const std::vector<mpq_class>& x) {
  std::vector<int> sorted = last;
  std::sort(sorted.begin(), sorted.end());
  mpq_class p = 1;
  int prev = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    for (int i = prev + 1; i <= sorted[k]; ++i) p /= x[k] + de[static_cast<std::size_t>(i - 1)];
    prev = sorted[k];
  }
  return p;
}

std::vector<int> word_last(const SortingNetworkWord& s) {
  std::vector<int> la(static_cast<std::size_t>(s.n() - 1), 0);
  for (std::size_t i = 0; i < s.letters().size(); ++i) la[static_cast<std::size_t>(s.letters()[i] - 1)] = static_cast<int>(i) + 1;
  return la;
}

std::vector<int> tableau_last(const StaircaseTableau& t) {
  std::vector<int> co;
  for (int i = t.n() - 1; i >= 1; --i) co.push_back(t.at(i, t.n() - i));
  return co;
}

}  // namespace

TEST_CASE("staircase counts: 2, 16, 768, 292864 for N = 3..6") {
  const long want[] = {1, 1, 2, 16, 768, 292864};
  for (int n = 2; n <= 6; ++n) {
    CHECK(staircase_hook(n) == want[n - 1]);
    CHECK(staircase_syt_count(n) == staircase_hook(n));
  }
  const int rows[] = {3, 1};
  CHECK(hook_length_count(rows) == 3);
}

TEST_CASE("enumerations are complete, distinct and valid") {
  for (int n = 2; n <= 5; ++n) {
    const auto syt = enumerate_syt(n);
    const auto sn = enumerate_networks(n);
    CHECK(mpz_class(static_cast<unsigned long>(syt.size())) == staircase_hook(n));
    CHECK(sn.size() == syt.size());
    CHECK(std::set<StaircaseTableau>(syt.begin(), syt.end()).size() == syt.size());
    CHECK(std::set<SortingNetworkWord>(sn.begin(), sn.end()).size() == sn.size());
    for (const auto& t : syt)
      for (int i = 1; i < n; ++i)
        for (int j = 1; i + j <= n; ++j) {
          if (i + j + 1 <= n) CHECK(t.at(i, j) < t.at(i, j + 1));
          if (i + 1 + j <= n) CHECK(t.at(i, j) < t.at(i + 1, j));
        }
  }
  CHECK_THROWS_AS(enumerate_syt(7), ResourceError);
}

TEST_CASE("words are validated by replay") {
  CHECK_NOTHROW(SortingNetworkWord(3, {1, 2, 1}));
  CHECK_NOTHROW(SortingNetworkWord(3, {2, 1, 2}));
  CHECK_THROWS_AS(SortingNetworkWord(3, {1, 1, 2}), InvariantError);
  CHECK_THROWS_AS(SortingNetworkWord(3, {1, 2}), InvariantError);
  CHECK_THROWS_AS(StaircaseTableau(3, {2, 1, 3}), InvariantError);
}

TEST_CASE("N = 3 worked example") {
  const StaircaseTableau t(3, {1, 2, 3});  // rows [1 2] [3]
  const FiberVectors v = tableau_vectors(t);
  CHECK(v.last == std::vector<int>{3, 2});
  CHECK(v.sigma == Permutation{2, 1});
  CHECK(v.sorted_last == std::vector<int>{2, 3});
  CHECK(v.de == std::vector<int>{1, 2, 1});

  const SortingNetworkWord s(3, {1, 2, 1});
  const FiberVectors w = network_vectors(s);
  CHECK(w.last == std::vector<int>{3, 2});
  CHECK(w.sigma == Permutation{2, 1});
  CHECK(w.de == std::vector<int>{2, 1, 1});

  const EgInsertion eg = edelman_greene_insert(s);
  CHECK(eg.insertion == std::vector<std::vector<int>>{{1, 2}, {2}});
  CHECK(eg.recording == std::vector<std::vector<int>>{{1, 2}, {3}});
  const EgInsertion eg2 = edelman_greene_insert(SortingNetworkWord(3, {2, 1, 2}));
  CHECK(eg2.recording == std::vector<std::vector<int>>{{1, 3}, {2}});
}

TEST_CASE("fiber vectors agree with direct definitions") {
  for (int n = 3; n <= 5; ++n) {
    for (const auto& t : enumerate_syt(n)) {
      const FiberVectors v = tableau_vectors(t);
      CHECK(v.last == tableau_last(t));
      CHECK(v.sigma == ranking_of(v.last));
      CHECK(v.de == naive_de_tableau(t));
      CHECK(std::is_sorted(v.sorted_last.begin(), v.sorted_last.end()));
    }
    for (const auto& s : enumerate_networks(n)) {
      const FiberVectors v = network_vectors(s);
      CHECK(v.last == word_last(s));
      CHECK(v.sigma == ranking_of(v.last));
      CHECK(v.de == naive_de_network(s));
    }
  }
}

TEST_CASE("aggregated F and G equal brute-force fiber sums") {
  for (int n = 3; n <= 5; ++n) {
    const std::vector<mpq_class> x = [&] {
      std::vector<mpq_class> p;
      for (int k = 1; k < n; ++k) p.emplace_back(7 * k + 3, 2 + k);
      return p;
    }();
    const auto perms = all_permutations(n - 1);
    std::vector<mpq_class> f(perms.size()), g(perms.size());
    auto slot = [&](const Permutation& s) {
      return static_cast<std::size_t>(std::find(perms.begin(), perms.end(), s) - perms.begin());
    };
    for (const auto& t : enumerate_syt(n)) {
      const FiberVectors v = tableau_vectors(t);
      const mpq_class p = naive_product(v.last, v.de, x);
      CHECK(factor_product(v, x) == p);
      f[slot(v.sigma)] += p;
    }
    for (const auto& s : enumerate_networks(n)) {
      const FiberVectors v = network_vectors(s);
      g[slot(v.sigma)] += naive_product(v.last, v.de, x);
    }
    for (std::size_t i = 0; i < perms.size(); ++i) {
      CHECK(eval_F(n, perms[i], x) == f[i]);
      CHECK(eval_G(n, perms[i], x) == g[i]);
      CHECK(f[i] == g[i]);
    }
  }
}

TEST_CASE("F_sigma = G_sigma for N = 2..5") {
  for (int n = 2; n <= 5; ++n) {
    const FgReport r = verify_FG_identity(n, 5, 11);
    CHECK(r.pass);
    CHECK(r.sum_identity);
    CHECK(r.tableau_total == r.network_total);
    for (const auto& s : r.per_sigma) CHECK(s.tableau_fiber == s.network_fiber);
  }
  CHECK_THROWS(verify_FG_identity(7, 1));
}

TEST_CASE("Edelman-Greene maps co to la and sigma to sigma") {
  for (int n = 2; n <= 5; ++n) {
    const EgTable table = eg_correspondence(n);
    CHECK(mpz_class(static_cast<unsigned long>(table.pairs.size())) == staircase_hook(n));
    std::set<SortingNetworkWord> images;
    for (const auto& [t, s] : table.pairs) {
      CHECK(word_last(s) == tableau_last(t));
      CHECK(network_vectors(s).sigma == tableau_vectors(t).sigma);
      CHECK(table(t) == s);
      images.insert(s);
    }
    CHECK(images.size() == table.pairs.size());
  }
}

TEST_CASE("per-object products are not preserved by Edelman-Greene") {
  const EgTable table = eg_correspondence(5);
  std::vector<mpq_class> x{mpq_class(3), mpq_class(5), mpq_class(11), mpq_class(17)};
  const auto w = find_factor_witness(table, x);
  REQUIRE(w.has_value());
  CHECK(factor_product(tableau_vectors(w->first), x) != factor_product(network_vectors(w->second), x));
  CHECK(network_vectors(w->second).sigma == tableau_vectors(w->first).sigma);
}
