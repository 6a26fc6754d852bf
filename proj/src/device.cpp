#include "harvestsim/device.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "harvestsim/energy_source.hpp"
#include "harvestsim/errors.hpp"

namespace harvestsim {

DeviceStateTable::DeviceStateTable(std::vector<State> states, std::string initial_state,
                                   std::string off_state)
    : states_(std::move(states)) {
  if (states_.empty()) throw InvalidParameter("device state table is empty");
  std::set<std::string> names;
  for (const auto& s : states_) {
    if (s.name.empty()) throw InvalidParameter("device state name is empty");
    if (!names.insert(s.name).second) {
      throw InvalidParameter("duplicate device state '" + s.name + "'");
    }
    if (!std::isfinite(s.current_a) || s.current_a < 0.0) {
      throw InvalidParameter("state '" + s.name + "' must draw a finite, non-negative current");
    }
  }
  if (off_state.empty()) {
    off_state = "off";
    if (!find(off_state)) states_.push_back(State{off_state, 0.0});
  }
  off_ = index_of(off_state);
  if (states_[off_].current_a != 0.0) {
    throw InvalidParameter("off state '" + off_state + "' must draw exactly 0 A");
  }
  initial_ = index_of(initial_state);
}

DeviceStateTable DeviceStateTable::from_power(
    const std::vector<std::pair<std::string, double>>& power_w, double voltage_v,
    std::string initial_state, std::string off_state) {
  if (!(std::isfinite(voltage_v) && voltage_v > 0.0)) {
    throw InvalidParameter("conversion voltage must be > 0");
  }
  std::vector<State> states;
  states.reserve(power_w.size());
  for (const auto& [name, p] : power_w) states.push_back(State{name, p / voltage_v});
  return DeviceStateTable(std::move(states), std::move(initial_state), std::move(off_state));
}

std::optional<StateIndex> DeviceStateTable::find(const std::string& name) const {
  for (StateIndex i = 0; i < states_.size(); ++i) {
    if (states_[i].name == name) return i;
  }
  return std::nullopt;
}

StateIndex DeviceStateTable::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw UnknownState("unknown device state '" + name + "'");
}

Device::Device(std::string name, DeviceStateTable table)
    : name_(std::move(name)), table_(std::move(table)), state_(table_.initial_state()) {}

void Device::set_state(const std::string& state) { set_state(table_.index_of(state)); }

void Device::set_state(StateIndex state) {
  if (source_ == nullptr) {
    throw InvalidParameter("device '" + name_ + "' is not attached to a source");
  }
  source_->notify_current_change(id_, state);
}

void SensorSchedule::validate() const {
  if (!(std::isfinite(period_s) && period_s > 0.0)) {
    throw InvalidParameter("sensor period_s must be > 0");
  }
  if (!(active_duration_s > 0.0 && active_duration_s < period_s)) {
    throw InvalidParameter("sensor active_duration_s must lie in (0, period_s)");
  }
  if (!(std::isfinite(start_offset_s) && start_offset_s >= 0.0)) {
    throw InvalidParameter("sensor start_offset_s must be >= 0");
  }
}

PeriodicSensor::PeriodicSensor(Simulator& sim, Device& device, SensorSchedule schedule,
                               std::string active_state, std::string idle_state)
    : sim_(sim),
      device_(device),
      schedule_((schedule.validate(), schedule)),
      active_(device.table().index_of(active_state)),
      idle_(device.table().index_of(idle_state)) {}

SimTime PeriodicSensor::activation_time(std::uint64_t k) const {
  return origin_ + (schedule_.start_offset_s + static_cast<double>(k) * schedule_.period_s);
}

void PeriodicSensor::start() {
  origin_ = sim_.now();
  sim_.schedule(activation_time(0), [this] { activate(0); });
}

void PeriodicSensor::activate(std::uint64_t k) {
  EnergySource* source = device_.source();
  if (source != nullptr && !source->depleted()) {
    device_.set_state(active_);
    // set_state may itself trip depletion; only count windows that ran
    if (!source->depleted()) {
      ++activations_;
      sim_.schedule(activation_time(k) + schedule_.active_duration_s, [this] {
        if (!device_.source()->depleted()) device_.set_state(idle_);
      });
    }
  }
  sim_.schedule(activation_time(k + 1), [this, k] { activate(k + 1); });
}

}  // namespace harvestsim
