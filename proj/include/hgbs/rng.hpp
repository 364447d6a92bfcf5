#pragma once

#include <cstdint>
#include <string_view>

namespace hgbs {

/// SplitMix64 generator. Output depends only on the 64-bit state, so streams
/// are identical on every platform. Child streams are derived with `split`.
class SplitMix64 {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64/v1";

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Independent child stream keyed by a subsystem tag.
  SplitMix64 split(std::string_view tag) const;

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Seed for a named subsystem, derived from a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag);

/// 64-bit FNV-1a hash, used for config fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace hgbs
