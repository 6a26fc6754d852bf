#include "harvestsim/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string_view>

#include "harvestsim/errors.hpp"

namespace harvestsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string at_line(int line) { return " (line " + std::to_string(line) + ")"; }

}  // namespace

HarvestTrace parse_trace(std::istream& in) {
  HarvestTrace trace;
  bool seen_header = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::string_view body = trim(text.substr(1));
      constexpr std::string_view key = "duration_s=";
      if (body.substr(0, key.size()) == key) {
        auto d = parse_number(body.substr(key.size()));
        if (!d || *d < 0.0) {
          throw TraceParseError("invalid duration_s directive" + at_line(line), line);
        }
        trace.duration_s = *d;
      }
      continue;
    }
    if (!seen_header) {
      if (text != "time_s,power_w") {
        throw TraceParseError("expected header 'time_s,power_w'" + at_line(line), line);
      }
      seen_header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw TraceParseError("expected two comma-separated fields" + at_line(line), line);
    }
    const auto t = parse_number(text.substr(0, comma));
    const auto p = parse_number(text.substr(comma + 1));
    if (!t || !p) throw TraceParseError("malformed number" + at_line(line), line);
    if (*t < 0.0) throw TraceParseError("negative sample time" + at_line(line), line);
    if (*p < 0.0) throw NegativePowerError("negative power " + std::string(trim(text.substr(comma + 1))) + at_line(line), line);
    if (!trace.samples.empty() && !(*t > trace.samples.back().time_s)) {
      throw MonotonicityError("sample time does not increase" + at_line(line), line);
    }
    trace.samples.push_back(TraceSample{*t, *p});
  }
  if (!seen_header) throw TraceParseError("missing header 'time_s,power_w'", line);
  if (trace.samples.empty()) throw TraceParseError("trace has no samples", line);
  if (trace.duration_s && *trace.duration_s < trace.samples.back().time_s) {
    throw TraceParseError("duration_s precedes the last sample", line);
  }
  return trace;
}

HarvestTrace ingest_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path.string() + "'");
  return parse_trace(in);
}

TraceSummary summarize(const HarvestTrace& trace) {
  TraceSummary s;
  s.samples = trace.samples.size();
  if (s.samples == 0) return s;
  s.duration_s = trace.duration();
  s.min_power_w = trace.min_power();
  s.max_power_w = trace.max_power();
  return s;
}

}  // namespace harvestsim
