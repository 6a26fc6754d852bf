#include "harvestsim/runner.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <ostream>
#include <system_error>

#include "harvestsim/errors.hpp"
#include "harvestsim/predictor.hpp"

namespace harvestsim {

namespace {

std::unique_ptr<EnergySource> make_source(Simulator& sim, const SourceSpec& spec) {
  if (const auto* b = std::get_if<BasicSourceParams>(&spec)) {
    return std::make_unique<BasicEnergySource>(sim, *b);
  }
  return std::make_unique<SupercapEnergySource>(sim, std::get<SupercapParams>(spec));
}

std::unique_ptr<EnergyHarvester> make_harvester(Simulator& sim, EnergySource& source,
                                                const HarvesterSpec& spec, std::uint64_t seed) {
  if (const auto* b = std::get_if<BasicHarvesterParams>(&spec)) {
    return std::make_unique<BasicHarvester>(sim, source, *b, seed);
  }
  return std::make_unique<TraceHarvester>(sim, source, std::get<TraceHarvesterSpec>(spec).trace);
}

void add_marker(std::string& events, std::string_view marker) {
  if (marker.empty()) return;
  std::size_t pos = 0;
  while (pos <= events.size()) {
    const auto end = std::min(events.find(';', pos), events.size());
    if (std::string_view(events).substr(pos, end - pos) == marker) return;
    pos = end + 1;
  }
  if (!events.empty()) events += ';';
  events += marker;
}

class RowCollector {
 public:
  RowCollector(EnergySource& source, const EnergyHarvester* harvester,
               const EnergyPredictor* predictor, Simulator& sim)
      : source_(source), harvester_(harvester), predictor_(predictor), sim_(sim) {}

  void snapshot(std::string_view marker) {
    OutputRow row;
    row.time_s = sim_.now().seconds();
    row.residual_energy_j = source_.residual_energy();
    row.residual_fraction = source_.residual_fraction();
    row.harvested_power_w = harvester_ != nullptr ? harvester_->power() : 0.0;
    row.total_current_a = source_.total_current();
    row.ledger = source_.ledger();
    if (predictor_ != nullptr && predictor_->latest()) {
      row.predicted_energy_j = predictor_->latest()->predicted_j;
      if (predictor_->latest()->cold_start) add_marker(row.event, "cold_start");
    }
    add_marker(row.event, marker);

    if (!rows_.empty() && rows_.back().time_s == row.time_s) {
      // same instant: keep the newest values and every marker seen
      std::string merged = std::move(rows_.back().event);
      std::size_t pos = 0;
      while (pos < row.event.size()) {
        const auto end = std::min(row.event.find(';', pos), row.event.size());
        add_marker(merged, std::string_view(row.event).substr(pos, end - pos));
        pos = end + 1;
      }
      row.event = std::move(merged);
      rows_.back() = std::move(row);
    } else {
      rows_.push_back(std::move(row));
    }
  }

  std::vector<OutputRow> take() { return std::move(rows_); }

 private:
  EnergySource& source_;
  const EnergyHarvester* harvester_;
  const EnergyPredictor* predictor_;
  Simulator& sim_;
  std::vector<OutputRow> rows_;
};

}  // namespace

RunResult run_scenario(const Scenario& scenario, std::optional<std::uint64_t> seed_override) {
  const std::uint64_t seed = seed_override.value_or(scenario.master_seed);
  Simulator sim;

  auto source = make_source(sim, scenario.source);
  std::vector<std::unique_ptr<Device>> devices;
  std::vector<std::unique_ptr<PeriodicSensor>> sensors;
  for (const auto& spec : scenario.devices) {
    devices.push_back(std::make_unique<Device>(spec.name, spec.table));
    source->attach(*devices.back());
    if (spec.sensor) {
      sensors.push_back(std::make_unique<PeriodicSensor>(sim, *devices.back(),
                                                         spec.sensor->schedule,
                                                         spec.sensor->active_state,
                                                         spec.sensor->idle_state));
    }
  }
  std::unique_ptr<EnergyHarvester> harvester;
  if (scenario.harvester) harvester = make_harvester(sim, *source, *scenario.harvester, seed);
  std::unique_ptr<EnergyPredictor> predictor;
  if (scenario.predictor && harvester) {
    predictor = std::make_unique<EnergyPredictor>(sim, *harvester, *scenario.predictor);
  }

  RunResult result;
  result.seed = seed;
  result.initial_energy_j = source->initial_energy();
  result.capacity_j = source->capacity();

  RowCollector rows(*source, harvester.get(), predictor.get(), sim);
  bool stop = false;
  source->add_listener([&](SourceEvent e, SimTime t) {
    if (e == SourceEvent::depleted && !result.first_depletion_s) {
      result.first_depletion_s = t.seconds();
    }
    rows.snapshot(to_string(e));
    if (e == SourceEvent::depleted && scenario.stop_on_depletion) {
      stop = true;
      sim.stop();
    }
  });

  source->start();
  if (harvester) harvester->start();
  for (auto& s : sensors) s->start();
  if (predictor) predictor->start();

  const double duration = scenario.duration_s;
  const double step = scenario.sample_interval_s;
  for (std::uint64_t k = 0; !stop; ++k) {
    const double t = std::min(static_cast<double>(k) * step, duration);
    sim.run_until(SimTime(t));
    if (stop) break;
    source->update();
    if (stop) break;
    rows.snapshot({});
    if (t >= duration) break;
  }

  result.rows = rows.take();
  if (harvester) result.harvest_changes = harvester->record().changes();
  for (const auto& d : devices) result.device_consumed_j.push_back(d->energy_consumed());
  return result;
}

std::string format_number(double v) {
  char buf[512];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc{}) {
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  }
  return std::string(buf, ptr);
}

namespace {

void write_field(std::ostream& out, std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(const std::vector<OutputRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.time_s) << ',' << format_number(r.residual_energy_j) << ','
        << format_number(r.residual_fraction) << ',' << format_number(r.harvested_power_w) << ','
        << format_number(r.total_current_a) << ',';
    if (r.predicted_energy_j) out << format_number(*r.predicted_energy_j);
    out << ',';
    write_field(out, r.event);
    out << '\n';
  }
}

void emit_csv(const std::vector<OutputRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace harvestsim
