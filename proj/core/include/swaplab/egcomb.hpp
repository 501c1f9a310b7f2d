#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace swaplab {

/// Exact rational carrier; values are kept canonical (reduced, positive denominator).
using ExactRational = mpq_class;

ExactRational make_rational(long num, long den = 1);

/// Permutation in one-line notation, values 1..n.
using Permutation = std::vector<int>;

/// Standard Young tableau of staircase shape (N-1, N-2, ..., 1).
/// Entries are stored row-major: row 1 (N-1 cells), row 2, ...
class StaircaseTableau {
 public:
  StaircaseTableau(int n, std::vector<int> entries);

  int n() const noexcept { return n_; }
  /// Entry at row i, column j (1-based, i + j <= N).
  int at(int i, int j) const;
  std::span<const int> entries() const noexcept { return entries_; }
  /// Rows as nested vectors, for display and tests.
  std::vector<std::vector<int>> rows() const;
  /// Row-major serialization, entries separated by spaces.
  std::string serialize() const;

  friend bool operator==(const StaircaseTableau&, const StaircaseTableau&) = default;
  friend auto operator<=>(const StaircaseTableau& a, const StaircaseTableau& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  int n_;
  std::vector<int> entries_;
};

/// Reduced word of the longest permutation of S_N: N(N-1)/2 adjacent swaps
/// taking the identity to the reverse permutation.
class SortingNetworkWord {
 public:
  SortingNetworkWord(int n, std::vector<int> letters);

  int n() const noexcept { return n_; }
  std::span<const int> letters() const noexcept { return letters_; }
  /// Comma-separated letters.
  std::string serialize() const;

  friend bool operator==(const SortingNetworkWord&, const SortingNetworkWord&) = default;
  friend auto operator<=>(const SortingNetworkWord& a, const SortingNetworkWord& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  int n_;
  std::vector<int> letters_;
};

inline constexpr int staircase_size(int n) { return n * (n - 1) / 2; }

/// Data entering F_sigma / G_sigma for one tableau or one word.
struct FiberVectors {
  enum class Source { Tableau, Network };

  Source source = Source::Tableau;
  /// co (row-end entries, bottom row first) or la (last occurrence of each letter).
  std::vector<int> last;
  /// Ranking permutation: sigma(i) < sigma(j) iff last(i) < last(j).
  Permutation sigma;
  /// Increasing rearrangement of `last`, i.e. last composed with sigma^{-1}.
  std::vector<int> sorted_last;
  /// de(k), k = 0 .. N(N-1)/2 - 1.
  std::vector<int> de;
};

FiberVectors tableau_vectors(const StaircaseTableau& lambda);
FiberVectors network_vectors(const SortingNetworkWord& s);

/// Exponent table of the product prod_k prod_{i in (sorted_last(k-1), sorted_last(k)]}
/// 1/(x_k + de(i-1)): entry [(k-1)*(N-1) + (d-1)] counts factors 1/(x_k + d).
std::vector<std::uint8_t> factor_exponents(const FiberVectors& v, int n);

/// Per-object product evaluated exactly at x.
ExactRational factor_product(const FiberVectors& v, std::span<const ExactRational> x);

inline constexpr int kEnumerationMaxN = 7;  // streaming enumeration bound
inline constexpr int kMaterializeMaxN = 6;  // in-memory list bound

/// Streams every tableau of SYT(delta_N), 2 <= N <= 7.
void for_each_syt(int n, const std::function<void(const StaircaseTableau&)>& visit);
/// Streams every sorting network of SN_N, 2 <= N <= 7.
void for_each_network(int n, const std::function<void(const SortingNetworkWord&)>& visit);

/// Materialized enumerations; N = 7 exceeds memory and raises ResourceError.
std::vector<StaircaseTableau> enumerate_syt(int n);
std::vector<SortingNetworkWord> enumerate_networks(int n);

/// Number of standard Young tableaux of a shape by the hook-length formula.
mpz_class hook_length_count(std::span<const int> row_lengths);
/// Hook-length count for the staircase delta_N.
mpz_class staircase_syt_count(int n);

/// All permutations of 1..m in lexicographic order.
std::vector<Permutation> all_permutations(int m);

/// F_sigma and G_sigma, aggregated by factor signature for fast exact evaluation.
struct FiberIndex {
  using SignatureCounts = std::map<std::vector<std::uint8_t>, std::uint64_t>;

  int n = 0;
  std::vector<Permutation> perms;
  std::vector<SignatureCounts> tableau_side;
  std::vector<SignatureCounts> network_side;
  std::vector<std::uint64_t> tableau_fiber_size;
  std::vector<std::uint64_t> network_fiber_size;

  std::size_t index_of(const Permutation& sigma) const;
};

/// Builds (and caches) the fiber index for N, 2 <= N <= 6.
const FiberIndex& fiber_index(int n);

ExactRational eval_F(int n, const Permutation& sigma, std::span<const ExactRational> x);
ExactRational eval_G(int n, const Permutation& sigma, std::span<const ExactRational> x);

/// Exact value of sum count * prod 1/(x_k + d)^e over a signature table.
ExactRational evaluate_signatures(const FiberIndex::SignatureCounts& table, int n,
                                  std::span<const ExactRational> x);

struct FgSigmaResult {
  Permutation sigma;
  std::uint64_t tableau_fiber = 0;
  std::uint64_t network_fiber = 0;
  int points_checked = 0;
  bool equal = true;
  std::optional<std::vector<ExactRational>> failing_point;
};

struct FgReport {
  int n = 0;
  int points = 0;
  std::uint64_t tableau_total = 0;
  std::uint64_t network_total = 0;
  std::vector<FgSigmaResult> per_sigma;
  bool sum_identity = true;  // sum over sigma of F equals sum of G at every point
  bool pass = false;
  double seconds = 0.0;
};

/// Checks F_sigma = G_sigma for every sigma at `num_points` random integer
/// points with coordinates uniform in [1e4, 1e9]. 2 <= N <= 6.
FgReport verify_FG_identity(int n, int num_points, std::uint64_t seed = 1, int threads = 1);

/// Edelman-Greene insertion of a reduced word: insertion tableau P and recording tableau Q.
struct EgInsertion {
  std::vector<std::vector<int>> insertion;
  std::vector<std::vector<int>> recording;
};
EgInsertion edelman_greene_insert(const SortingNetworkWord& s);

/// The bijection EG_N: SYT(delta_N) -> SN_N, as the inverse of word -> recording tableau.
struct EgTable {
  int n = 0;
  std::vector<std::pair<StaircaseTableau, SortingNetworkWord>> pairs;  // sorted by tableau

  const SortingNetworkWord& operator()(const StaircaseTableau& lambda) const;
  std::string to_csv() const;
};
EgTable eg_correspondence(int n);

/// First tableau (in enumeration order) whose factor product at x differs from
/// that of its image word.
std::optional<std::pair<StaircaseTableau, SortingNetworkWord>> find_factor_witness(
    const EgTable& table, std::span<const ExactRational> x);

}  // namespace swaplab
