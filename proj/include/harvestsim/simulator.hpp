#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "harvestsim/sim_time.hpp"

namespace harvestsim {

using EventId = std::uint64_t;

/// Single-threaded discrete-event kernel: a virtual clock plus a queue of
/// timed callbacks. Events at equal times fire in insertion order.
class Simulator {
 public:
  using Action = std::function<void()>;

  SimTime now() const noexcept { return now_; }

  /// Enqueues `action` at absolute time `at`. Throws SchedulingInPast when
  /// `at` precedes the clock.
  EventId schedule(SimTime at, Action action);

  /// Enqueues `action` `delay` seconds from now.
  EventId schedule_in(double delay, Action action);

  /// True iff the event was pending; a cancelled event never executes.
  bool cancel(EventId id);

  /// Fires every event with fire time <= t_end, including ones scheduled by
  /// the actions themselves, then sets the clock to t_end. If an action calls
  /// stop() the loop ends after that action and the clock stays at its time.
  std::size_t run_until(SimTime t_end);

  /// Requests run_until() to return after the current event.
  void stop() noexcept { stop_requested_ = true; }
  bool stopped() const noexcept { return stopped_; }

  std::size_t pending() const noexcept { return actions_.size(); }

 private:
  struct Key {
    SimTime at;
    EventId seq;
    // min-heap on (at, seq)
    bool operator<(const Key& o) const noexcept {
      if (at != o.at) return at > o.at;
      return seq > o.seq;
    }
  };

  SimTime now_{};
  EventId next_seq_ = 0;
  bool stop_requested_ = false;
  bool stopped_ = false;
  std::priority_queue<Key> heap_;
  std::unordered_map<EventId, Action> actions_;
};

}  // namespace harvestsim
