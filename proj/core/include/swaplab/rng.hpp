#pragma once

#include <cstdint>
#include <limits>

namespace swaplab {

/// SplitMix64 output function (Steele, Lea & Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

/// Derives an independent 64-bit key from a parent key and two labels.
/// Used to split a master seed into per-trial, per-edge and per-purpose streams.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t a,
                                   std::uint64_t b = 0) noexcept {
  constexpr std::uint64_t kGolden = UINT64_C(0x9E3779B97F4A7C15);
  std::uint64_t k = mix64(parent + kGolden);
  k = mix64(k ^ (a * UINT64_C(0xD1B54A32D192ED03) + kGolden));
  k = mix64(k ^ (b * UINT64_C(0x8CB92BA72F3D8DD7) + kGolden));
  return k;
}

/// Counter-based generator: the i-th output is a pure function of (key, i),
/// so any stream can be re-read or jumped into without replaying it.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
      : key_(key), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  /// Output at an arbitrary counter position; does not advance.
  static constexpr std::uint64_t at(std::uint64_t key, std::uint64_t counter) noexcept {
    return mix64(mix64(key ^ UINT64_C(0x6A09E667F3BCC909)) +
                 (counter + 1) * UINT64_C(0x9E3779B97F4A7C15));
  }

  constexpr result_type operator()() noexcept { return at(key_, counter_++); }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept { return to_open_unit((*this)()); }
  /// Exp(1) variate.
  double exponential() noexcept;
  /// Standard normal variate (Box-Muller, one output per two uniforms).
  double normal() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

  static constexpr double to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace swaplab
