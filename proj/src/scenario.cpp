#include "harvestsim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "harvestsim/errors.hpp"
#include "harvestsim/trace_io.hpp"

namespace harvestsim {

namespace {

int line_of(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.line >= 0 ? m.line + 1 : 0;
}

[[noreturn]] void invalid(const std::string& path, int line, const std::string& msg) {
  std::string what = path + ": " + msg;
  if (line > 0) what += " (line " + std::to_string(line) + ")";
  throw ValidationError(what, path, line);
}

// Walks one YAML mapping, tracking which keys were read so the rest can be
// rejected as unknown.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.IsMap()) invalid(path_.empty() ? "<root>" : path_, line_of(node_), "expected a mapping");
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  int line() const { return line_of(node_); }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return static_cast<bool>(node_[key]);
  }

  YAML::Node node(const std::string& key) {
    seen_.insert(key);
    return node_[key];
  }

  template <typename T>
  T required(const std::string& key) {
    if (!has(key)) invalid(child(key), line(), "missing required field");
    return convert<T>(key);
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  std::optional<T> optional(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return convert<T>(key);
  }

  int line_for(const std::string& key) const {
    const auto n = node_[key];
    return n ? line_of(n) : line();
  }

  void finish() const {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) invalid(child(key), line_of(kv.first), "unknown key");
    }
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    const YAML::Node n = node_[key];
    if (!n.IsScalar()) invalid(child(key), line_of(n), "expected a scalar value");
    try {
      T v = n.as<T>();
      if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) invalid(child(key), line_of(n), "expected a finite number");
      }
      return v;
    } catch (const YAML::BadConversion&) {
      invalid(child(key), line_of(n), "cannot convert '" + n.Scalar() + "'");
    }
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

double positive(MapReader& r, const std::string& key) {
  const double v = r.required<double>(key);
  if (!(v > 0.0)) invalid(r.child(key), r.line_for(key), "must be > 0");
  return v;
}

double non_negative(double v, MapReader& r, const std::string& key) {
  if (!(v >= 0.0)) invalid(r.child(key), r.line_for(key), "must be >= 0");
  return v;
}

Thresholds read_thresholds(MapReader& r) {
  Thresholds t;
  t.low = r.get_or<double>("low_threshold", t.low);
  t.high = r.get_or<double>("high_threshold", t.high);
  if (!(0.0 <= t.low && t.low < 1.0)) {
    invalid(r.child("low_threshold"), r.line_for("low_threshold"), "must lie in [0, 1)");
  }
  if (!(t.low < t.high && t.high <= 1.0)) {
    invalid(r.child("high_threshold"), r.line_for("high_threshold"),
            "must lie in (low_threshold, 1]");
  }
  return t;
}

SourceSpec read_source(const YAML::Node& node) {
  MapReader r(node, "source");
  const auto type = r.required<std::string>("type");
  if (type == "basic") {
    BasicSourceParams p;
    p.initial_energy_j = positive(r, "initial_energy_j");
    p.supply_voltage_v = positive(r, "supply_voltage_v");
    p.update_interval_s = r.has("update_interval_s") ? positive(r, "update_interval_s") : 1.0;
    p.thresholds = read_thresholds(r);
    r.finish();
    return p;
  }
  if (type == "supercap") {
    SupercapParams p;
    p.capacitance_f = positive(r, "capacitance_f");
    p.initial_voltage_v = positive(r, "initial_voltage_v");
    p.max_voltage_v = positive(r, "max_voltage_v");
    p.cutoff_voltage_v = non_negative(r.required<double>("cutoff_voltage_v"), r, "cutoff_voltage_v");
    p.update_interval_s = r.has("update_interval_s") ? positive(r, "update_interval_s") : 1.0;
    p.thresholds = read_thresholds(r);
    if (!(p.initial_voltage_v <= p.max_voltage_v)) {
      invalid(r.child("max_voltage_v"), r.line_for("max_voltage_v"),
              "must be >= initial_voltage_v");
    }
    if (!(p.cutoff_voltage_v < p.initial_voltage_v)) {
      invalid(r.child("cutoff_voltage_v"), r.line_for("cutoff_voltage_v"),
              "must be < initial_voltage_v");
    }
    r.finish();
    return p;
  }
  invalid(r.child("type"), r.line_for("type"), "expected 'basic' or 'supercap', got '" + type + "'");
}

DeviceSpec read_device(const YAML::Node& node, const std::string& path, double voltage_v) {
  MapReader r(node, path);
  const auto name = r.required<std::string>("name");
  const YAML::Node states = r.node("states");
  if (!states || !states.IsSequence() || states.size() == 0) {
    invalid(r.child("states"), r.line_for("states"), "expected a non-empty list of states");
  }
  std::vector<DeviceStateTable::State> table;
  for (std::size_t i = 0; i < states.size(); ++i) {
    MapReader s(states[i], r.child("states") + "[" + std::to_string(i) + "]");
    DeviceStateTable::State st;
    st.name = s.required<std::string>("name");
    const auto current = s.optional<double>("current_a");
    const auto power = s.optional<double>("power_w");
    if (current.has_value() == power.has_value()) {
      invalid(s.path(), s.line(), "exactly one of current_a or power_w is required");
    }
    if (current) {
      st.current_a = non_negative(*current, s, "current_a");
    } else {
      st.current_a = non_negative(*power, s, "power_w") / voltage_v;
    }
    s.finish();
    table.push_back(std::move(st));
  }
  const auto initial = r.get_or<std::string>("initial_state", table.front().name);
  const auto off = r.get_or<std::string>("off_state", "");

  std::optional<SensorSpec> sensor;
  if (r.has("sensor")) {
    MapReader s(r.node("sensor"), r.child("sensor"));
    SensorSpec spec;
    spec.schedule.period_s = positive(s, "period_s");
    spec.schedule.active_duration_s = positive(s, "active_duration_s");
    spec.schedule.start_offset_s =
        non_negative(s.get_or<double>("start_offset_s", 0.0), s, "start_offset_s");
    spec.active_state = s.get_or<std::string>("active_state", "active");
    spec.idle_state = s.get_or<std::string>("idle_state", "idle");
    if (!(spec.schedule.active_duration_s < spec.schedule.period_s)) {
      invalid(s.child("active_duration_s"), s.line_for("active_duration_s"),
              "must be shorter than period_s");
    }
    s.finish();
    sensor = spec;
  }
  r.finish();

  try {
    DeviceStateTable t(std::move(table), initial, off);
    if (sensor) {
      t.index_of(sensor->active_state);
      t.index_of(sensor->idle_state);
    }
    return DeviceSpec{name, std::move(t), sensor};
  } catch (const Error& e) {
    invalid(path, r.line(), e.what());
  }
}

HarvesterSpec read_harvester(const YAML::Node& node, const std::filesystem::path& base_dir) {
  MapReader r(node, "harvester");
  const auto type = r.required<std::string>("type");
  if (type == "basic") {
    BasicHarvesterParams p;
    p.h_max_w = non_negative(r.required<double>("h_max_w"), r, "h_max_w");
    p.update_period_s = positive(r, "update_period_s");
    p.stream_tag = r.get_or<std::string>("stream", "harvester");
    r.finish();
    return p;
  }
  if (type == "trace") {
    TraceHarvesterSpec spec;
    spec.path = r.required<std::string>("path");
    if (spec.path.is_relative()) spec.path = base_dir / spec.path;
    const bool wrap = r.get_or<bool>("wrap", false);
    const double scale = non_negative(r.get_or<double>("scale", 1.0), r, "scale");
    r.finish();
    spec.trace = ingest_trace(spec.path);
    spec.trace.wrap = wrap;
    spec.trace.scale = scale;
    return spec;
  }
  invalid(r.child("type"), r.line_for("type"), "expected 'basic' or 'trace', got '" + type + "'");
}

PredictorParams read_predictor(const YAML::Node& node) {
  MapReader r(node, "predictor");
  PredictorParams p;
  p.alpha = r.required<double>("alpha");
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) {
    invalid(r.child("alpha"), r.line_for("alpha"), "must lie in [0, 1]");
  }
  p.slot_duration_s = positive(r, "slot_duration_s");
  p.slots_per_day = r.required<std::size_t>("slots_per_day");
  if (p.slots_per_day == 0) invalid(r.child("slots_per_day"), r.line_for("slots_per_day"), "must be positive");
  if (p.slot_duration_s * static_cast<double>(p.slots_per_day) != kSecondsPerDay) {
    invalid(r.child("slots_per_day"), r.line_for("slots_per_day"),
            "slot_duration_s * slots_per_day must equal 86400");
  }
  p.store_capacity_days = r.get_or<std::size_t>("store_capacity_days", 7);
  if (p.store_capacity_days == 0) {
    invalid(r.child("store_capacity_days"), r.line_for("store_capacity_days"), "must be positive");
  }
  p.similarity_window = r.get_or<std::size_t>("similarity_window", 4);
  if (p.similarity_window == 0 || p.similarity_window > p.slots_per_day) {
    invalid(r.child("similarity_window"), r.line_for("similarity_window"),
            "must lie in [1, slots_per_day]");
  }
  p.stream_tag = r.get_or<std::string>("stream", "predictor");
  r.finish();
  return p;
}

Scenario build(const YAML::Node& root, const std::filesystem::path& base_dir) {
  MapReader r(root, "");
  Scenario sc;
  sc.duration_s = non_negative(r.required<double>("duration_s"), r, "duration_s");
  sc.master_seed = r.get_or<std::uint64_t>("master_seed", 0);
  sc.sample_interval_s = r.has("sample_interval_s") ? positive(r, "sample_interval_s") : 60.0;
  sc.stop_on_depletion = r.get_or<bool>("stop_on_depletion", false);

  if (!r.has("source")) invalid("source", r.line(), "missing required section");
  sc.source = read_source(r.node("source"));
  const double v = nominal_voltage(sc.source);

  if (r.has("devices")) {
    const YAML::Node devs = r.node("devices");
    if (!devs.IsSequence()) invalid("devices", line_of(devs), "expected a list");
    std::set<std::string> names;
    for (std::size_t i = 0; i < devs.size(); ++i) {
      const std::string path = "devices[" + std::to_string(i) + "]";
      auto d = read_device(devs[i], path, v);
      if (!names.insert(d.name).second) {
        invalid(path + ".name", line_of(devs[i]), "duplicate device name '" + d.name + "'");
      }
      sc.devices.push_back(std::move(d));
    }
  }
  if (r.has("harvester")) sc.harvester = read_harvester(r.node("harvester"), base_dir);
  if (r.has("predictor")) {
    sc.predictor = read_predictor(r.node("predictor"));
    if (!sc.harvester) {
      invalid("predictor", r.line_for("predictor"), "a predictor needs a harvester to observe");
    }
  }
  r.finish();
  return sc;
}

YAML::Node parse_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    const int line = e.mark.line >= 0 ? e.mark.line + 1 : 0;
    throw ParseError("malformed config: " + e.msg + " (line " + std::to_string(line) + ")",
                     "<root>", line);
  }
}

}  // namespace

double nominal_voltage(const SourceSpec& source) {
  if (const auto* b = std::get_if<BasicSourceParams>(&source)) return b->supply_voltage_v;
  return std::get<SupercapParams>(source).initial_voltage_v;
}

Scenario load_config_string(const std::string& yaml, const std::filesystem::path& base_dir) {
  const YAML::Node root = parse_yaml(yaml);
  if (!root || root.IsNull()) throw ParseError("config is empty", "<root>", 0);
  return build(root, base_dir);
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return load_config_string(text.str(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace harvestsim
