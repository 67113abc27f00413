#pragma once

#include <cstdint>
#include <span>

namespace tspde {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key of the independent stream for (master seed, realization index).
constexpr std::uint64_t stream_key(std::uint64_t master_seed,
                                   std::uint64_t realization) noexcept {
  return mix64(mix64(master_seed) ^ mix64(realization + 0x632be59bd9b4e019ULL));
}

/// Counter-based N(0,1) source: draw i of a stream is a pure function of
/// (key, i), so any window of the stream can be produced in isolation.
/// Pairs (2p, 2p+1) come from one Box-Muller transform.
class NormalStream {
 public:
  explicit constexpr NormalStream(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key() const noexcept { return key_; }

  /// Uniform on the open interval (0, 1) for counter i.
  double uniform(std::uint64_t i) const noexcept;
  double normal(std::uint64_t i) const noexcept;
  /// out[m] = normal(first + m).
  void fill(std::span<double> out, std::uint64_t first) const noexcept;

 private:
  std::uint64_t key_;
};

}  // namespace tspde
