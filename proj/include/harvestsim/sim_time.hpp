#pragma once

#include <cmath>
#include <compare>
#include <string>

#include "harvestsim/errors.hpp"

namespace harvestsim {

/// A point on the virtual time axis, in seconds.
///
/// Stored as a double; at the day-to-month scales simulated here that leaves
/// well under a microsecond of resolution. Negative and non-finite values are
/// rejected at construction so that ordering is always total.
class SimTime {
 public:
  constexpr SimTime() = default;

  explicit SimTime(double seconds) : seconds_(seconds) {
    if (!std::isfinite(seconds) || seconds < 0.0) {
      throw InvalidTime("invalid simulation time: " + std::to_string(seconds));
    }
  }

  static SimTime zero() { return SimTime{}; }

  double seconds() const noexcept { return seconds_; }

  friend bool operator==(SimTime a, SimTime b) noexcept { return a.seconds_ == b.seconds_; }
  friend auto operator<=>(SimTime a, SimTime b) noexcept {
    // Both operands are finite, so the partial order is total.
    return a.seconds_ < b.seconds_   ? std::strong_ordering::less
           : a.seconds_ > b.seconds_ ? std::strong_ordering::greater
                                     : std::strong_ordering::equal;
  }

  friend SimTime operator+(SimTime t, double dt) { return SimTime(t.seconds_ + dt); }
  /// Elapsed seconds from `b` to `a`; may be negative.
  friend double operator-(SimTime a, SimTime b) noexcept { return a.seconds_ - b.seconds_; }

 private:
  double seconds_ = 0.0;
};

inline SimTime seconds(double s) { return SimTime(s); }

}  // namespace harvestsim
