#include "harvestsim/simulator.hpp"

#include <string>
#include <utility>

namespace harvestsim {

EventId Simulator::schedule(SimTime at, Action action) {
  if (at < now_) {
    throw SchedulingInPast("cannot schedule at t=" + std::to_string(at.seconds()) +
                           " s, clock is at " + std::to_string(now_.seconds()) + " s");
  }
  const EventId id = next_seq_++;
  heap_.push(Key{at, id});
  actions_.emplace(id, std::move(action));
  return id;
}

EventId Simulator::schedule_in(double delay, Action action) {
  return schedule(now_ + delay, std::move(action));
}

bool Simulator::cancel(EventId id) { return actions_.erase(id) > 0; }

std::size_t Simulator::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw SchedulingInPast("run_until target precedes the clock");
  }
  std::size_t fired = 0;
  stop_requested_ = false;
  while (!heap_.empty() && heap_.top().at <= t_end) {
    const Key key = heap_.top();
    heap_.pop();
    auto it = actions_.find(key.seq);
    if (it == actions_.end()) continue;  // cancelled
    Action action = std::move(it->second);
    actions_.erase(it);
    now_ = key.at;
    action();
    ++fired;
    if (stop_requested_) {
      stopped_ = true;
      return fired;
    }
  }
  now_ = t_end;
  return fired;
}

}  // namespace harvestsim
