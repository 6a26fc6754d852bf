#include <doctest.h>

#include <string>

#include "harvestsim/errors.hpp"
#include "harvestsim/scenario.hpp"

using namespace harvestsim;

namespace {

const std::string kMinimal = R"(duration_s: 100
source:
  type: basic
  initial_energy_j: 1.0
  supply_voltage_v: 3.0
)";

template <typename E>
std::pair<std::string, int> failure(const std::string& yaml) {
  try {
    load_config_string(yaml, HARVESTSIM_SOURCE_DIR "/scenarios");
  } catch (const E& e) {
    return {e.path(), e.line()};
  }
  return {"<no error>", -1};
}

}  // namespace

TEST_CASE("bundled fig2 scenario") {
  const Scenario sc = load_config(HARVESTSIM_SOURCE_DIR "/scenarios/fig2_h2uw.yaml");
  const auto& src = std::get<BasicSourceParams>(sc.source);
  CHECK(src.initial_energy_j == 1.0);
  CHECK(src.supply_voltage_v == 3.0);
  CHECK(src.thresholds.low == 0.10);
  CHECK(src.thresholds.high == 0.15);
  CHECK(sc.stop_on_depletion);
  REQUIRE(sc.devices.size() == 1);
  const auto& t = sc.devices[0].table;
  // 3 uW and 15 uW at 3 V
  CHECK(t[t.index_of("idle")].current_a == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(t[t.index_of("active")].current_a == doctest::Approx(5e-6).epsilon(1e-12));
  REQUIRE(sc.devices[0].sensor);
  CHECK(sc.devices[0].sensor->schedule.period_s == 60.0);
  CHECK(sc.devices[0].sensor->schedule.active_duration_s == 1.0);
  REQUIRE(sc.harvester);
  const auto& h = std::get<BasicHarvesterParams>(*sc.harvester);
  CHECK(h.update_period_s == 300.0);
  CHECK(h.h_max_w == 2e-6);
}

TEST_CASE("defaults") {
  const Scenario sc = load_config_string(kMinimal);
  CHECK(sc.sample_interval_s == 60.0);
  CHECK(sc.master_seed == 0);
  CHECK_FALSE(sc.stop_on_depletion);
  CHECK(sc.devices.empty());
  CHECK_FALSE(sc.harvester);
  CHECK_FALSE(sc.predictor);
  CHECK(std::get<BasicSourceParams>(sc.source).update_interval_s == 1.0);
}

TEST_CASE("trace harvester paths resolve next to the config") {
  const Scenario sc = load_config(HARVESTSIM_SOURCE_DIR "/scenarios/fig3_trace.yaml");
  const auto& h = std::get<TraceHarvesterSpec>(*sc.harvester);
  CHECK(h.trace.samples.size() == 2016);
  CHECK_FALSE(h.trace.wrap);
  CHECK(h.trace.scale == 1.0);
}

TEST_CASE("predictor alpha out of range names the field") {
  const auto [path, line] = failure<ValidationError>(kMinimal + R"(harvester:
  type: basic
  h_max_w: 1.0e-6
  update_period_s: 300
predictor:
  alpha: 1.5
  slot_duration_s: 1800
  slots_per_day: 48
)");
  CHECK(path == "predictor.alpha");
  CHECK(line == 11);
}

TEST_CASE("sensor active window must be shorter than the period") {
  const auto [path, line] = failure<ValidationError>(kMinimal + R"(devices:
  - name: s
    states:
      - { name: idle, current_a: 1.0e-6 }
      - { name: active, current_a: 5.0e-6 }
    sensor: { period_s: 60, active_duration_s: 60 }
)");
  CHECK(path == "devices[0].sensor.active_duration_s");
  CHECK(line == 11);
}

TEST_CASE("unknown keys are rejected") {
  auto [path, line] = failure<ValidationError>(kMinimal + "  initial_energy_mj: 5\n");
  CHECK(path == "source.initial_energy_mj");
  CHECK(line == 6);
  std::tie(path, line) = failure<ValidationError>("durations: 5\n" + kMinimal);
  CHECK(path == "durations");
  CHECK(line == 1);
}

TEST_CASE("validation failures") {
  CHECK(failure<ValidationError>("duration_s: 10\n").first == "source");
  CHECK(failure<ValidationError>("duration_s: -1\nsource: {type: basic, initial_energy_j: 1, "
                                 "supply_voltage_v: 3}\n")
            .first == "duration_s");
  CHECK(failure<ValidationError>("duration_s: ten\nsource: {type: basic, initial_energy_j: 1, "
                                 "supply_voltage_v: 3}\n")
            .first == "duration_s");
  CHECK(failure<ValidationError>(kMinimal + "  low_threshold: 0.5\n").first ==
        "source.high_threshold");
  CHECK(failure<ValidationError>("duration_s: 1\nsource: {type: lithium}\n").first ==
        "source.type");
  CHECK(failure<ValidationError>("duration_s: 1\nsource: {type: supercap, capacitance_f: 1, "
                                 "initial_voltage_v: 2, max_voltage_v: 1.5, "
                                 "cutoff_voltage_v: 1}\n")
            .first == "source.max_voltage_v");
  CHECK(failure<ValidationError>(kMinimal + "predictor: {alpha: 0.5, slot_duration_s: 1800, "
                                            "slots_per_day: 48}\n")
            .first == "predictor");
  CHECK(failure<ValidationError>(kMinimal + "harvester: {type: basic, h_max_w: 1, "
                                            "update_period_s: 1}\npredictor: {alpha: 0.5, "
                                            "slot_duration_s: 1000, slots_per_day: 48}\n")
            .first == "predictor.slots_per_day");
  CHECK(failure<ValidationError>(kMinimal + "devices:\n  - name: d\n    states:\n"
                                            "      - {name: on, current_a: 1, power_w: 1}\n")
            .first == "devices[0].states[0]");
  CHECK(failure<ValidationError>(kMinimal + "devices:\n  - name: d\n    states:\n"
                                            "      - {name: on, current_a: 1}\n"
                                            "    initial_state: sleeping\n")
            .first == "devices[0]");
  CHECK(failure<ValidationError>(kMinimal + "devices:\n"
                                            "  - {name: d, states: [{name: on, current_a: 1}]}\n"
                                            "  - {name: d, states: [{name: on, current_a: 1}]}\n")
            .first == "devices[1].name");
}

TEST_CASE("malformed yaml is a parse error with a line") {
  const auto [path, line] = failure<ParseError>("duration_s: 1\nsource: {type: basic\n");
  CHECK(line >= 2);
}

TEST_CASE("file-level errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), IoError);
  CHECK_THROWS_AS(load_config_string(kMinimal + "harvester: {type: trace, path: missing.csv}\n"),
                  IoError);
}
