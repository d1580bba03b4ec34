#pragma once

// Portable seeded randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; every derived distribution here is
// implemented locally so that results do not depend on the standard library
// vendor.

#include <cstdint>
#include <random>
#include <vector>

namespace pakf {

/// SplitMix64 finalizer. Used to derive independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Mixes a base seed with stream/position tags into a sub-seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t a = 0,
                          std::uint64_t b = 0) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n); rejection sampling, no modulo bias. n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via the Box-Muller transform (one value per call, the
  /// partner is cached).
  double normal();
  /// Poisson(mean) by Knuth's product method; intended for small means.
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// `count` distinct integers drawn uniformly from [0, n) (partial Fisher-Yates),
/// in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng);

}  // namespace pakf
