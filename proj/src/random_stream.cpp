#include "harvestsim/random_stream.hpp"

#include <cmath>
#include <utility>

#include "harvestsim/errors.hpp"

namespace harvestsim {

namespace {

std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::string_view tag) noexcept {
  return splitmix64(splitmix64(master_seed) ^ fnv1a64(tag));
}

RandomStream::RandomStream(std::uint64_t master_seed, std::string tag)
    : master_seed_(master_seed),
      tag_(std::move(tag)),
      engine_(derive_stream_seed(master_seed_, tag_)) {}

double RandomStream::next_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  if (!(lo <= hi)) {
    throw InvalidRange("uniform: lo must not exceed hi");
  }
  const double u = next_unit();
  if (lo == hi) return lo;
  const double x = lo + (hi - lo) * u;
  // rounding can land exactly on hi for wide intervals
  return x < hi ? x : std::nextafter(hi, lo);
}

}  // namespace harvestsim
