// harvestsim: command-line front end.
//
//   harvestsim run --config <path> [--seed <u64>] [--out <path>] [--runs N]
//   harvestsim validate --config <path>
//   harvestsim trace-info <path>
//
// Exit codes: 0 success, 2 config error, 3 trace error, 4 io error.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "harvestsim/errors.hpp"
#include "harvestsim/runner.hpp"
#include "harvestsim/scenario.hpp"
#include "harvestsim/trace_io.hpp"

namespace fs = std::filesystem;
using namespace harvestsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitTrace = 3;
constexpr int kExitIo = 4;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("harvestsim");
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("HARVESTSIM_LOG")) {
    logger->set_level(spdlog::level::from_str(env));
  }
  spdlog::set_default_logger(logger);
}

fs::path per_seed_path(const fs::path& out, std::uint64_t seed) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + "_seed" + std::to_string(seed) +
                     out.extension().string());
  return p;
}

void run_one(const Scenario& sc, std::uint64_t seed, const std::optional<fs::path>& out) {
  const RunResult r = run_scenario(sc, seed);
  spdlog::info("seed {}: {} rows", seed, r.rows.size());
  if (r.first_depletion_s) spdlog::info("seed {}: first depletion at {} s", seed, *r.first_depletion_s);
  if (out) {
    emit_csv(r.rows, *out);
  } else {
    write_csv(r.rows, std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
  }
}

int cmd_run(const fs::path& config, std::optional<std::uint64_t> seed_opt,
            std::optional<fs::path> out, unsigned runs) {
  const Scenario sc = load_config(config);
  const std::uint64_t seed = seed_opt.value_or(sc.master_seed);
  if (runs <= 1) {
    run_one(sc, seed, out);
    return 0;
  }
  if (!out) {
    spdlog::error("--runs > 1 needs --out (one file per seed is written)");
    return kExitConfig;
  }
  // independent seeds, isolated state per thread
  std::vector<std::exception_ptr> errors(runs);
  std::vector<std::thread> workers;
  for (unsigned i = 0; i < runs; ++i) {
    workers.emplace_back([&, i] {
      try {
        run_one(sc, seed + i, per_seed_path(*out, seed + i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return 0;
}

int cmd_validate(const fs::path& config) {
  const Scenario sc = load_config(config);
  std::cout << "ok: " << config.string() << " (" << sc.devices.size() << " device(s), duration "
            << format_number(sc.duration_s) << " s)\n";
  return 0;
}

int cmd_trace_info(const fs::path& path) {
  const HarvestTrace trace = ingest_trace(path);
  const TraceSummary s = summarize(trace);
  std::cout << "samples=" << s.samples << '\n'
            << "duration_s=" << format_number(s.duration_s) << '\n'
            << "min_power_w=" << format_number(s.min_power_w) << '\n'
            << "max_power_w=" << format_number(s.max_power_w) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Discrete-event simulator for energy-harvesting sensor nodes"};
  app.require_subcommand(1);

  fs::path run_config;
  std::uint64_t seed = 0;
  fs::path out;
  unsigned runs = 1;
  auto* run = app.add_subcommand("run", "Run a scenario and emit CSV");
  run->add_option("--config", run_config, "Scenario file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the master seed");
  auto* out_opt = run->add_option("--out", out, "Output CSV (default: stdout)");
  run->add_option("--runs", runs, "Run N consecutive seeds concurrently")
      ->check(CLI::PositiveNumber);

  fs::path validate_config;
  auto* validate = app.add_subcommand("validate", "Load and validate a scenario");
  validate->add_option("--config", validate_config, "Scenario file")->required();

  fs::path trace_path;
  auto* trace_info = app.add_subcommand("trace-info", "Summarize a harvest trace file");
  trace_info->add_option("path", trace_path, "Trace CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return cmd_run(run_config,
                     *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt,
                     *out_opt ? std::optional<fs::path>(out) : std::nullopt, runs);
    }
    if (*validate) return cmd_validate(validate_config);
    if (*trace_info) return cmd_trace_info(trace_path);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const TraceError& e) {
    spdlog::error("{}", e.what());
    return kExitTrace;
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
  return 0;
}
