#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "harvestsim/random_stream.hpp"
#include "harvestsim/simulator.hpp"

namespace harvestsim {

class EnergySource;

/// History of a piecewise-constant power signal: each entry holds from its
/// time until the next entry. Power before the first entry is zero.
class PowerRecord {
 public:
  struct Change {
    double time_s;
    double power_w;
  };

  /// Appends a change at `time_s` (non-decreasing); a second change at the
  /// same instant replaces the first.
  void set(double time_s, double power_w);

  /// Exact integral of the power over [t0, t1].
  double energy(double t0, double t1) const;
  double power_at(double t) const;

  const std::vector<Change>& changes() const noexcept { return changes_; }

 private:
  std::vector<Change> changes_;
};

/// Base of every harvester: owns the power record and forwards each change of
/// harvested power to the attached source.
class EnergyHarvester {
 public:
  EnergyHarvester(Simulator& sim, EnergySource& source);
  EnergyHarvester(const EnergyHarvester&) = delete;
  EnergyHarvester& operator=(const EnergyHarvester&) = delete;
  virtual ~EnergyHarvester() = default;

  /// Sets the initial power at the current time and schedules updates.
  virtual void start() = 0;

  double power() const noexcept { return power_w_; }

  /// Energy harvested over [slot_start, slot_end], integrated exactly from
  /// the power record. Throws SlotInFuture if slot_end is past the clock.
  double slot_energy(SimTime slot_start, SimTime slot_end) const;

  const PowerRecord& record() const noexcept { return record_; }
  EnergySource& source() const noexcept { return source_; }

 protected:
  void set_power(double power_w);

  Simulator& sim_;

 private:
  EnergySource& source_;
  double power_w_ = 0.0;
  PowerRecord record_;
};

struct BasicHarvesterParams {
  double h_max_w = 0.0;
  double update_period_s = 300.0;
  std::string stream_tag = "harvester";

  void validate() const;
};

/// Draws a fresh power level from Uniform[0, h_max_w) every update period
/// and holds it until the next draw.
class BasicHarvester final : public EnergyHarvester {
 public:
  BasicHarvester(Simulator& sim, EnergySource& source, BasicHarvesterParams params,
                 std::uint64_t master_seed);

  void start() override;
  std::uint64_t updates() const noexcept { return updates_; }
  const BasicHarvesterParams& params() const noexcept { return params_; }

 private:
  void update(std::uint64_t k);

  BasicHarvesterParams params_;
  RandomStream stream_;
  SimTime origin_{};
  std::uint64_t updates_ = 0;
};

struct TraceSample {
  double time_s;
  double power_w;
};

/// A harvested power trace replayed with zero-order hold.
///
/// The trace ends at `duration()`: the explicit duration when given,
/// otherwise the time of the last sample. When wrapping, playback restarts
/// at every multiple of the duration. Without wrapping, power is zero from
/// the end onwards. A trace whose duration does not exceed its first sample
/// time (a lone sample with no explicit duration) is constant forever.
struct HarvestTrace {
  std::vector<TraceSample> samples;
  std::optional<double> duration_s;
  bool wrap = false;
  double scale = 1.0;

  /// Throws InvalidParameter when the invariants fail (non-empty, strictly
  /// increasing times, non-negative power, scale >= 0, duration >= last time).
  void validate() const;

  double duration() const;
  bool is_constant() const;
  double max_power() const;
  double min_power() const;
};

/// Power held by `trace` at time `t` (relative to the start of playback).
double trace_power(const HarvestTrace& trace, SimTime t);

/// Replays a HarvestTrace into its source, one event per breakpoint.
class TraceHarvester final : public EnergyHarvester {
 public:
  TraceHarvester(Simulator& sim, EnergySource& source, HarvestTrace trace);

  void start() override;

  const HarvestTrace& trace() const noexcept { return trace_; }
  /// Set once a non-wrapping trace has run past its end.
  bool exhausted() const noexcept { return exhausted_; }
  void on_exhausted(std::function<void(SimTime)> cb) { on_exhausted_ = std::move(cb); }

 private:
  void schedule_after(std::uint64_t cycle, std::size_t index);

  HarvestTrace trace_;
  SimTime origin_{};
  bool exhausted_ = false;
  std::function<void(SimTime)> on_exhausted_;
};

}  // namespace harvestsim
