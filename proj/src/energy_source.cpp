#include "harvestsim/energy_source.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "harvestsim/errors.hpp"

namespace harvestsim {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string_view to_string(SourceEvent e) noexcept {
  switch (e) {
    case SourceEvent::depleted:
      return "depleted";
    case SourceEvent::recharged:
      return "recharged";
  }
  return "unknown";
}

void Thresholds::validate() const {
  if (!(0.0 <= low && low < high && high <= 1.0)) {
    throw InvalidParameter("thresholds must satisfy 0 <= low < high <= 1");
  }
}

void BasicSourceParams::validate() const {
  if (!positive(initial_energy_j)) throw InvalidParameter("initial_energy_j must be > 0");
  if (!positive(supply_voltage_v)) throw InvalidParameter("supply_voltage_v must be > 0");
  if (!positive(update_interval_s)) throw InvalidParameter("update_interval_s must be > 0");
  thresholds.validate();
}

void SupercapParams::validate() const {
  if (!positive(capacitance_f)) throw InvalidParameter("capacitance_f must be > 0");
  if (!positive(update_interval_s)) throw InvalidParameter("update_interval_s must be > 0");
  if (!(std::isfinite(max_voltage_v) && 0.0 <= cutoff_voltage_v &&
        cutoff_voltage_v < initial_voltage_v && initial_voltage_v <= max_voltage_v)) {
    throw InvalidParameter(
        "supercapacitor voltages must satisfy 0 <= cutoff < initial <= max");
  }
  thresholds.validate();
}

EnergySource::EnergySource(Simulator& sim, double initial_energy_j, double capacity_j,
                           double update_interval_s, Thresholds thresholds)
    : sim_(sim),
      initial_energy_(initial_energy_j),
      capacity_(capacity_j),
      update_interval_s_(update_interval_s),
      thresholds_(thresholds),
      energy_(initial_energy_j),
      last_update_(sim.now()),
      origin_(sim.now()) {}

DeviceId EnergySource::attach(Device& device) {
  if (device.source_ != nullptr) {
    throw InvalidParameter("device '" + device.name() + "' is already attached to a source");
  }
  if (started_) update();
  device.source_ = this;
  device.id_ = devices_.size();
  device.state_ = depleted_ ? device.table().off_state() : device.table().initial_state();
  devices_.push_back(&device);
  return device.id_;
}

void EnergySource::attach_harvester() {
  if (has_harvester_) {
    throw InvalidParameter("an energy source accepts exactly one harvester");
  }
  has_harvester_ = true;
}

void EnergySource::start() {
  if (started_) return;
  started_ = true;
  origin_ = sim_.now();
  last_update_ = origin_;
  check_thresholds();
  sim_.schedule(origin_ + update_interval_s_, [this] { periodic_update(1); });
}

void EnergySource::periodic_update(std::uint64_t k) {
  update();
  const SimTime next = origin_ + static_cast<double>(k + 1) * update_interval_s_;
  sim_.schedule(next, [this, k] { periodic_update(k + 1); });
}

double EnergySource::total_current() const {
  double sum = 0.0;
  for (const Device* d : devices_) sum += d->current();
  return sum;
}

SourceLedger EnergySource::ledger() const noexcept {
  return SourceLedger{consumed_.value(), harvested_.value(), clamp_loss_.value()};
}

void EnergySource::integrate(double dt) {
  if (!(dt >= 0.0)) {
    throw NegativeDuration("integration step must be non-negative");
  }
  advance_energy(dt);
  if (dt > 0.0) last_update_ = SimTime(last_update_.seconds() + dt);
  check_thresholds();
}

void EnergySource::update() {
  const SimTime now = sim_.now();
  if (now < last_update_) return;
  advance_energy(now - last_update_);
  last_update_ = now;
  check_thresholds();
}

void EnergySource::advance_energy(double dt) {
  if (dt <= 0.0) return;
  const double v = voltage();
  double demand = 0.0;
  for (const Device* d : devices_) demand += v * d->current() * dt;
  const double gain = harvested_power_w_ * dt;

  double next = energy_ + gain - demand;
  double consumed = demand;
  double loss = 0.0;
  if (next < 0.0) {
    consumed = energy_ + gain;
    next = 0.0;
  } else if (next > capacity_) {
    loss = next - capacity_;
    next = capacity_;
  }

  if (demand > 0.0) {
    const double share = consumed / demand;
    for (Device* d : devices_) d->consumed_.add(v * d->current() * dt * share);
  }
  consumed_.add(consumed);
  harvested_.add(gain);
  clamp_loss_.add(loss);
  energy_ = next;
  on_energy_changed();
}

void EnergySource::notify_current_change(DeviceId id, StateIndex state) {
  if (id >= devices_.size()) {
    throw UnknownDevice("no device with id " + std::to_string(id));
  }
  Device& device = *devices_[id];
  if (state >= device.table().size()) {
    throw UnknownState("device '" + device.name() + "' has no state index " +
                       std::to_string(state));
  }
  update();
  device.state_ = depleted_ ? device.table().off_state() : state;
}

void EnergySource::notify_harvest_change(double power_w) {
  if (!(std::isfinite(power_w) && power_w >= 0.0)) {
    throw NegativePower("harvested power must be finite and non-negative");
  }
  update();
  harvested_power_w_ = power_w;
}

void EnergySource::check_thresholds() {
  const double f = residual_fraction();
  if (!depleted_ && f <= thresholds_.low) {
    depleted_ = true;
    for (Device* d : devices_) d->state_ = d->table().off_state();
    for (auto& l : listeners_) l(SourceEvent::depleted, last_update_);
  } else if (depleted_ && f >= thresholds_.high) {
    depleted_ = false;
    for (Device* d : devices_) d->state_ = d->table().initial_state();
    for (auto& l : listeners_) l(SourceEvent::recharged, last_update_);
  }
}

BasicEnergySource::BasicEnergySource(Simulator& sim, const BasicSourceParams& params)
    : EnergySource(sim, (params.validate(), params.initial_energy_j), params.initial_energy_j,
                   params.update_interval_s, params.thresholds),
      supply_voltage_v_(params.supply_voltage_v) {}

double BasicEnergySource::residual_fraction() const noexcept {
  return std::clamp(residual_energy() / capacity(), 0.0, 1.0);
}

SupercapEnergySource::SupercapEnergySource(Simulator& sim, const SupercapParams& params)
    : EnergySource(sim,
                   (params.validate(), energy_at(params.capacitance_f, params.initial_voltage_v)),
                   energy_at(params.capacitance_f, params.max_voltage_v),
                   params.update_interval_s, params.thresholds),
      params_(params),
      voltage_v_(params.initial_voltage_v) {}

void SupercapEnergySource::on_energy_changed() {
  const double v = std::sqrt(2.0 * residual_energy() / params_.capacitance_f);
  voltage_v_ = std::min(v, params_.max_voltage_v);
}

double SupercapEnergySource::residual_fraction() const noexcept {
  const double vc2 = params_.cutoff_voltage_v * params_.cutoff_voltage_v;
  const double vm2 = params_.max_voltage_v * params_.max_voltage_v;
  return std::clamp((voltage_v_ * voltage_v_ - vc2) / (vm2 - vc2), 0.0, 1.0);
}

}  // namespace harvestsim
