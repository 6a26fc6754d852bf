#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace harvestsim {

/// Mixes a master seed with a component tag into a 64-bit stream seed.
/// FNV-1a over the tag, then a splitmix64 finalizer over the combination.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::string_view tag) noexcept;

/// Reproducible per-component random stream.
///
/// Each component draws from its own engine keyed by (master_seed, tag), so
/// adding or retagging one component never shifts another's samples. The
/// engine is mt19937_64 and the real-valued mapping is done by hand, so
/// sequences are bit-identical across standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::string tag);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  const std::string& tag() const noexcept { return tag_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  /// Uniform real in [lo, hi); returns lo when lo == hi. Throws InvalidRange
  /// if lo > hi.
  double uniform(double lo, double hi);

 private:
  std::uint64_t master_seed_;
  std::string tag_;
  std::mt19937_64 engine_;
};

}  // namespace harvestsim
