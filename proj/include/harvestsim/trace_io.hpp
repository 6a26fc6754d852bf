#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "harvestsim/harvester.hpp"

namespace harvestsim {

/// Reads a harvest trace in the CSV dialect:
///
///   # free-form comment
///   # duration_s=604800
///   time_s,power_w
///   0,0
///   300,1.25
///
/// Comment lines start with '#'; the optional duration directive is a
/// comment of the form `# duration_s=<value>`. The header must appear before
/// the first sample. Times must be strictly increasing and power non-negative.
/// Numbers use '.' as decimal point and no thousands separators.
///
/// Throws TraceParseError, MonotonicityError or NegativePowerError carrying
/// the 1-based line number; IoError if the file cannot be opened.
HarvestTrace ingest_trace(const std::filesystem::path& path);
HarvestTrace parse_trace(std::istream& in);

struct TraceSummary {
  std::size_t samples = 0;
  double duration_s = 0.0;
  double min_power_w = 0.0;
  double max_power_w = 0.0;
};

TraceSummary summarize(const HarvestTrace& trace);

}  // namespace harvestsim
