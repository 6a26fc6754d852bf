#include "harvestsim/harvester.hpp"

#include <algorithm>
#include <cmath>

#include "harvestsim/energy_source.hpp"
#include "harvestsim/errors.hpp"

namespace harvestsim {

void PowerRecord::set(double time_s, double power_w) {
  if (!changes_.empty() && changes_.back().time_s == time_s) {
    changes_.back().power_w = power_w;
    return;
  }
  changes_.push_back(Change{time_s, power_w});
}

double PowerRecord::power_at(double t) const {
  auto it = std::upper_bound(changes_.begin(), changes_.end(), t,
                             [](double x, const Change& c) { return x < c.time_s; });
  if (it == changes_.begin()) return 0.0;
  return std::prev(it)->power_w;
}

double PowerRecord::energy(double t0, double t1) const {
  if (t1 <= t0 || changes_.empty()) return 0.0;
  // first change strictly after t0
  auto it = std::upper_bound(changes_.begin(), changes_.end(), t0,
                             [](double x, const Change& c) { return x < c.time_s; });
  double power = it == changes_.begin() ? 0.0 : std::prev(it)->power_w;
  double t = t0;
  double total = 0.0;
  for (; it != changes_.end() && it->time_s < t1; ++it) {
    total += power * (it->time_s - t);
    t = it->time_s;
    power = it->power_w;
  }
  total += power * (t1 - t);
  return total;
}

EnergyHarvester::EnergyHarvester(Simulator& sim, EnergySource& source)
    : sim_(sim), source_(source) {
  source_.attach_harvester();
}

double EnergyHarvester::slot_energy(SimTime slot_start, SimTime slot_end) const {
  if (slot_end > sim_.now()) {
    throw SlotInFuture("slot ends after the current simulation time");
  }
  if (slot_start > slot_end) {
    throw InvalidRange("slot start is after slot end");
  }
  return record_.energy(slot_start.seconds(), slot_end.seconds());
}

void EnergyHarvester::set_power(double power_w) {
  source_.notify_harvest_change(power_w);
  power_w_ = power_w;
  record_.set(sim_.now().seconds(), power_w);
}

void BasicHarvesterParams::validate() const {
  if (!(std::isfinite(h_max_w) && h_max_w >= 0.0)) {
    throw InvalidParameter("h_max_w must be finite and >= 0");
  }
  if (!(std::isfinite(update_period_s) && update_period_s > 0.0)) {
    throw InvalidParameter("update_period_s must be > 0");
  }
}

BasicHarvester::BasicHarvester(Simulator& sim, EnergySource& source,
                               BasicHarvesterParams params, std::uint64_t master_seed)
    : EnergyHarvester(sim, source),
      params_((params.validate(), std::move(params))),
      stream_(master_seed, params_.stream_tag) {}

void BasicHarvester::start() {
  origin_ = sim_.now();
  update(0);
}

void BasicHarvester::update(std::uint64_t k) {
  set_power(stream_.uniform(0.0, params_.h_max_w));
  ++updates_;
  sim_.schedule(origin_ + static_cast<double>(k + 1) * params_.update_period_s,
                [this, k] { update(k + 1); });
}

void HarvestTrace::validate() const {
  if (samples.empty()) throw InvalidParameter("harvest trace is empty");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.time_s) || s.time_s < 0.0) {
      throw InvalidParameter("trace sample times must be finite and >= 0");
    }
    if (!std::isfinite(s.power_w) || s.power_w < 0.0) {
      throw InvalidParameter("trace sample power must be finite and >= 0");
    }
    if (i > 0 && !(s.time_s > samples[i - 1].time_s)) {
      throw InvalidParameter("trace sample times must be strictly increasing");
    }
  }
  if (!(std::isfinite(scale) && scale >= 0.0)) {
    throw InvalidParameter("trace scale must be finite and >= 0");
  }
  if (duration_s && !(std::isfinite(*duration_s) && *duration_s >= samples.back().time_s)) {
    throw InvalidParameter("trace duration must not precede the last sample");
  }
}

double HarvestTrace::duration() const {
  return duration_s ? *duration_s : samples.back().time_s;
}

bool HarvestTrace::is_constant() const { return duration() <= samples.front().time_s; }

double HarvestTrace::max_power() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.power_w);
  return m;
}

double HarvestTrace::min_power() const {
  double m = samples.front().power_w;
  for (const auto& s : samples) m = std::min(m, s.power_w);
  return m;
}

double trace_power(const HarvestTrace& trace, SimTime t) {
  const auto& s = trace.samples;
  if (trace.is_constant()) return trace.scale * s.front().power_w;
  const double d = trace.duration();
  double local = t.seconds();
  if (trace.wrap) {
    local = std::fmod(local, d);
  } else if (local >= d) {
    return 0.0;
  }
  auto it = std::upper_bound(s.begin(), s.end(), local,
                             [](double x, const TraceSample& c) { return x < c.time_s; });
  if (it == s.begin()) return trace.scale * s.front().power_w;
  return trace.scale * std::prev(it)->power_w;
}

TraceHarvester::TraceHarvester(Simulator& sim, EnergySource& source, HarvestTrace trace)
    : EnergyHarvester(sim, source), trace_((trace.validate(), std::move(trace))) {}

void TraceHarvester::start() {
  origin_ = sim_.now();
  set_power(trace_.scale * trace_.samples.front().power_w);
  if (trace_.is_constant()) return;
  // index 0 is in effect from the start of each cycle
  schedule_after(0, 0);
}

// Schedules the breakpoint that follows sample `index` of cycle `cycle`.
void TraceHarvester::schedule_after(std::uint64_t cycle, std::size_t index) {
  const auto& s = trace_.samples;
  const double d = trace_.duration();
  std::size_t next = index + 1;
  const bool in_cycle = next < s.size() && (!trace_.wrap || s[next].time_s < d);
  if (in_cycle) {
    const SimTime at = origin_ + (static_cast<double>(cycle) * d + s[next].time_s);
    sim_.schedule(at, [this, cycle, next] {
      set_power(trace_.scale * trace_.samples[next].power_w);
      schedule_after(cycle, next);
    });
    return;
  }
  const SimTime end = origin_ + static_cast<double>(cycle + 1) * d;
  if (trace_.wrap) {
    sim_.schedule(end, [this, cycle] {
      set_power(trace_.scale * trace_.samples.front().power_w);
      schedule_after(cycle + 1, 0);
    });
  } else {
    sim_.schedule(end, [this] {
      set_power(0.0);
      exhausted_ = true;
      if (on_exhausted_) on_exhausted_(sim_.now());
    });
  }
}

}  // namespace harvestsim
