#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace stocksel::rng {

/// splitmix64 finalizer. Stable across platforms and compilers.
std::uint64_t mix(std::uint64_t x);

/// Derives an independent seed from a root seed, a named stream, and an index.
/// All project randomness flows from one root seed through these sub-streams
/// (data, init, shuffle, dropout) so experiments differ only in the varied
/// factor.
std::uint64_t derive(std::uint64_t root, std::string_view stream, std::uint64_t index = 0);

/// Deterministic generator (splitmix64 sequence) with the handful of
/// distributions this project needs. Not cryptographic.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01();
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller (pairs cached).
  double normal();

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace stocksel::rng
