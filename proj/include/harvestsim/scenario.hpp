#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "harvestsim/device.hpp"
#include "harvestsim/energy_source.hpp"
#include "harvestsim/harvester.hpp"
#include "harvestsim/predictor.hpp"

namespace harvestsim {

struct SensorSpec {
  SensorSchedule schedule;
  std::string active_state = "active";
  std::string idle_state = "idle";
};

struct DeviceSpec {
  std::string name;
  DeviceStateTable table;
  std::optional<SensorSpec> sensor;
};

struct TraceHarvesterSpec {
  std::filesystem::path path;
  HarvestTrace trace;
};

using SourceSpec = std::variant<BasicSourceParams, SupercapParams>;
using HarvesterSpec = std::variant<BasicHarvesterParams, TraceHarvesterSpec>;

/// A fully validated, runnable experiment: one node, one source, any number
/// of devices, at most one harvester and an optional predictor.
struct Scenario {
  double duration_s = 0.0;
  std::uint64_t master_seed = 0;
  double sample_interval_s = 60.0;
  bool stop_on_depletion = false;
  SourceSpec source;
  std::vector<DeviceSpec> devices;
  std::optional<HarvesterSpec> harvester;
  std::optional<PredictorParams> predictor;
};

/// Voltage used to convert per-state power to current: the supply voltage of
/// a basic source, the initial voltage of a supercapacitor.
double nominal_voltage(const SourceSpec& source);

/// Loads and validates a YAML scenario. Relative trace paths resolve against
/// the config file's directory. Throws ParseError / ValidationError (with
/// field path and line), TraceError for a malformed trace, IoError when a
/// file cannot be read.
Scenario load_config(const std::filesystem::path& path);

/// Same as load_config but from text; relative paths resolve against
/// `base_dir`.
Scenario load_config_string(const std::string& yaml,
                            const std::filesystem::path& base_dir = ".");

}  // namespace harvestsim
