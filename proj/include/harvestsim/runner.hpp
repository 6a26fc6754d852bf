#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "harvestsim/energy_source.hpp"
#include "harvestsim/harvester.hpp"
#include "harvestsim/scenario.hpp"

namespace harvestsim {

/// One observation of the node. `event` holds ';'-joined markers
/// (depleted, recharged, cold_start). The ledger is carried in memory for
/// offline conservation checks; it is not part of the CSV.
struct OutputRow {
  double time_s = 0.0;
  double residual_energy_j = 0.0;
  double residual_fraction = 0.0;
  double harvested_power_w = 0.0;
  double total_current_a = 0.0;
  std::optional<double> predicted_energy_j;
  std::string event;
  SourceLedger ledger;
};

struct RunResult {
  std::uint64_t seed = 0;
  double initial_energy_j = 0.0;
  double capacity_j = 0.0;
  std::vector<OutputRow> rows;
  /// Time of the first EnergyDepleted event, if any.
  std::optional<double> first_depletion_s;
  std::vector<PowerRecord::Change> harvest_changes;
  std::vector<double> device_consumed_j;
};

/// Runs `scenario` to completion: rows at every multiple of
/// sample_interval_s, one row per threshold event, and a final row at
/// duration_s (or at the first depletion when stop_on_depletion is set).
RunResult run_scenario(const Scenario& scenario,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

inline constexpr const char* kCsvHeader =
    "time_s,residual_energy_j,residual_fraction,harvested_power_w,total_current_a,"
    "predicted_energy_j,event";

/// Shortest decimal, in fixed notation, that parses back to `v` exactly.
std::string format_number(double v);

void write_csv(const std::vector<OutputRow>& rows, std::ostream& out);
/// Throws IoError.
void emit_csv(const std::vector<OutputRow>& rows, const std::filesystem::path& path);

}  // namespace harvestsim
