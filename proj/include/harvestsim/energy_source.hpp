#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "harvestsim/compensated_sum.hpp"
#include "harvestsim/device.hpp"
#include "harvestsim/simulator.hpp"

namespace harvestsim {

/// Residual-fraction hysteresis band. Crossing `low` downward depletes the
/// source; crossing `high` upward recharges it.
struct Thresholds {
  double low = 0.10;
  double high = 0.15;

  void validate() const;
};

struct BasicSourceParams {
  double initial_energy_j = 1.0;
  double supply_voltage_v = 3.0;
  double update_interval_s = 1.0;
  Thresholds thresholds{};

  void validate() const;
};

struct SupercapParams {
  double capacitance_f = 0.1;
  double initial_voltage_v = 2.0;
  double max_voltage_v = 2.5;
  double cutoff_voltage_v = 1.0;
  double update_interval_s = 1.0;
  Thresholds thresholds{};

  void validate() const;
};

enum class SourceEvent { depleted, recharged };

std::string_view to_string(SourceEvent e) noexcept;

/// Cumulative energy flows since construction.
struct SourceLedger {
  double consumed_j = 0.0;
  double harvested_j = 0.0;
  double clamp_loss_j = 0.0;
};

/// Common machinery of an energy source: device bookkeeping, the
/// piecewise-constant integration step, the conservation ledger and the
/// depletion/recharge hysteresis. Subclasses define the voltage seen by the
/// devices and how the residual fraction is measured.
///
/// Each step applies E' = clamp(E - V*I*dt + P_h*dt, 0, capacity) with the
/// load and harvest held constant over dt; overflow above capacity goes to
/// clamp_loss, and a shortfall below zero reduces what is booked as consumed.
class EnergySource {
 public:
  using Listener = std::function<void(SourceEvent, SimTime)>;

  EnergySource(const EnergySource&) = delete;
  EnergySource& operator=(const EnergySource&) = delete;
  virtual ~EnergySource() = default;

  /// Attaches a device; the device must outlive the source.
  DeviceId attach(Device& device);
  /// Registers the (single) harvester feeding this source.
  void attach_harvester();

  /// Starts the periodic self-update. Call once, at the start of the run.
  void start();

  double initial_energy() const noexcept { return initial_energy_; }
  double capacity() const noexcept { return capacity_; }
  /// Residual energy as of the last update.
  double residual_energy() const noexcept { return energy_; }
  /// Voltage applied to device currents during the next step.
  virtual double voltage() const noexcept = 0;
  virtual double residual_fraction() const noexcept = 0;

  double harvested_power() const noexcept { return harvested_power_w_; }
  /// Sum of the present currents of every attached device.
  double total_current() const;
  bool depleted() const noexcept { return depleted_; }
  SimTime last_update() const noexcept { return last_update_; }
  SourceLedger ledger() const noexcept;
  const std::vector<Device*>& devices() const noexcept { return devices_; }

  /// Advances the state by `dt` seconds at the present load and harvest.
  /// Throws NegativeDuration.
  void integrate(double dt);
  /// Integrates from the last update to the simulator clock.
  void update();

  /// Integrate-then-switch: settles energy at the old current, then moves the
  /// device to `state` (or keeps it off while depleted). Throws UnknownDevice.
  void notify_current_change(DeviceId device, StateIndex state);
  /// Settles energy at the old harvested power, then applies `power_w`.
  /// Throws NegativePower.
  void notify_harvest_change(double power_w);

  void add_listener(Listener listener) { listeners_.push_back(std::move(listener)); }

 protected:
  EnergySource(Simulator& sim, double initial_energy_j, double capacity_j,
               double update_interval_s, Thresholds thresholds);

  /// Called after every change of energy_ so subclasses can refresh derived
  /// quantities (the supercapacitor voltage).
  virtual void on_energy_changed() {}

  Simulator& sim_;

 private:
  void advance_energy(double dt);
  void check_thresholds();
  void periodic_update(std::uint64_t k);

  double initial_energy_;
  double capacity_;
  double update_interval_s_;
  Thresholds thresholds_;
  double energy_;
  double harvested_power_w_ = 0.0;
  bool depleted_ = false;
  bool has_harvester_ = false;
  bool started_ = false;
  SimTime last_update_{};
  SimTime origin_{};
  CompensatedSum consumed_;
  CompensatedSum harvested_;
  CompensatedSum clamp_loss_;
  std::vector<Device*> devices_;
  std::vector<Listener> listeners_;
};

/// Linear source: constant supply voltage, capacity equal to the initial
/// energy.
class BasicEnergySource final : public EnergySource {
 public:
  BasicEnergySource(Simulator& sim, const BasicSourceParams& params);

  double voltage() const noexcept override { return supply_voltage_v_; }
  double residual_fraction() const noexcept override;

 private:
  double supply_voltage_v_;
};

/// Supercapacitor: E = C*V^2/2, with the terminal voltage derived from the
/// stored energy after every step. Devices see the voltage at the start of
/// each step. Usable energy is the window between the cutoff and max voltage.
class SupercapEnergySource final : public EnergySource {
 public:
  SupercapEnergySource(Simulator& sim, const SupercapParams& params);

  double voltage() const noexcept override { return voltage_v_; }
  double residual_fraction() const noexcept override;

  double capacitance() const noexcept { return params_.capacitance_f; }
  const SupercapParams& params() const noexcept { return params_; }

  static double energy_at(double capacitance_f, double voltage_v) noexcept {
    return 0.5 * capacitance_f * voltage_v * voltage_v;
  }

 protected:
  void on_energy_changed() override;

 private:
  SupercapParams params_;
  double voltage_v_;
};

}  // namespace harvestsim
