#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "harvestsim/compensated_sum.hpp"
#include "harvestsim/simulator.hpp"

namespace harvestsim {

class EnergySource;

using DeviceId = std::size_t;
using StateIndex = std::size_t;

/// Named operating states of a device and the current each one draws.
class DeviceStateTable {
 public:
  struct State {
    std::string name;
    double current_a;
  };

  /// `states` must be non-empty with unique names and finite, non-negative
  /// currents. `off_state` must name a state drawing exactly 0 A; when empty,
  /// an "off" state at 0 A is appended unless one already exists.
  DeviceStateTable(std::vector<State> states, std::string initial_state,
                   std::string off_state = {});

  /// Builds a table from per-state power, converting once at `voltage_v`.
  static DeviceStateTable from_power(const std::vector<std::pair<std::string, double>>& power_w,
                                     double voltage_v, std::string initial_state,
                                     std::string off_state = {});

  std::size_t size() const noexcept { return states_.size(); }
  const State& operator[](StateIndex i) const { return states_.at(i); }
  /// Throws UnknownState.
  StateIndex index_of(const std::string& name) const;
  std::optional<StateIndex> find(const std::string& name) const;

  StateIndex initial_state() const noexcept { return initial_; }
  StateIndex off_state() const noexcept { return off_; }

 private:
  std::vector<State> states_;
  StateIndex initial_ = 0;
  StateIndex off_ = 0;
};

/// A device energy model attached to one energy source. The device only
/// records which state it is in; the source performs all integration and
/// credits consumed energy back to the device.
class Device {
 public:
  Device(std::string name, DeviceStateTable table);
  Device(const Device&) = delete;
  Device& operator=(const Device&) = delete;

  const std::string& name() const noexcept { return name_; }
  const DeviceStateTable& table() const noexcept { return table_; }
  StateIndex state() const noexcept { return state_; }
  const std::string& state_name() const { return table_[state_].name; }
  double current() const { return table_[state_].current_a; }

  /// Switches state at the current simulation time. The source is integrated
  /// at the old current first. On a depleted source the device is held in
  /// its off state. Throws UnknownState.
  void set_state(const std::string& state);
  void set_state(StateIndex state);

  /// Energy drawn from the source through the source's last update.
  double energy_consumed() const noexcept { return consumed_.value(); }

  EnergySource* source() const noexcept { return source_; }
  DeviceId id() const noexcept { return id_; }

 private:
  friend class EnergySource;

  std::string name_;
  DeviceStateTable table_;
  StateIndex state_;
  CompensatedSum consumed_;
  EnergySource* source_ = nullptr;
  DeviceId id_ = 0;
};

/// Duty-cycle pattern of a periodic sensor.
struct SensorSchedule {
  double period_s = 60.0;
  double active_duration_s = 1.0;
  double start_offset_s = 0.0;

  /// Throws InvalidParameter unless 0 < active_duration_s < period_s and
  /// start_offset_s >= 0.
  void validate() const;
  double duty_cycle() const noexcept { return active_duration_s / period_s; }
};

/// Drives a Device through a periodic sensing pattern: every period it enters
/// the active state for active_duration_s, then returns to idle. Activations
/// are skipped while the source is depleted and pick up again on the next
/// period once it recharges.
class PeriodicSensor {
 public:
  PeriodicSensor(Simulator& sim, Device& device, SensorSchedule schedule,
                 std::string active_state = "active", std::string idle_state = "idle");

  /// Schedules the first activation at start_offset_s (relative to now).
  void start();

  std::uint64_t activations() const noexcept { return activations_; }
  const SensorSchedule& schedule() const noexcept { return schedule_; }

 private:
  void activate(std::uint64_t k);
  SimTime activation_time(std::uint64_t k) const;

  Simulator& sim_;
  Device& device_;
  SensorSchedule schedule_;
  StateIndex active_;
  StateIndex idle_;
  SimTime origin_{};
  std::uint64_t activations_ = 0;
};

}  // namespace harvestsim
