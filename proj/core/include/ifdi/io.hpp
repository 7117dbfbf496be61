/**
 * @file io.hpp
 * @brief Scenario files, telemetry export, and plot-ready data emission.
 *
 * Scenarios are single JSON documents (schema in docs/scenario_format.md).
 * Telemetry time series are RFC-4180 CSV files; fault reports go to one
 * structured JSON file. All numeric output uses shortest round-trip
 * formatting, so a rerun with the same seed is byte-identical.
 */

#ifndef IFDI_IO_HPP
#define IFDI_IO_HPP

#include <filesystem>
#include <string>

#include "ifdi/simulation.hpp"

namespace ifdi::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written next to each run's telemetry.
struct RunManifest {
    std::string scenario_path;
    std::string output_dir;
    std::string tool_version;
    std::string config_hash;
    double wall_clock_seconds = 0.0;
};

/// Shortest round-trip decimal formatting (locale-independent).
std::string format_double(double value);

/// Parses and validates a scenario file. Throws ParseError on malformed
/// JSON and ValidationError listing every invariant violation.
sim::ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical JSON form of a config (defaults materialized, keys sorted).
std::string canonical_scenario_json(const sim::ScenarioConfig& config);

/// Writes the canonical form to a file.
void save_scenario(const sim::ScenarioConfig& config, const std::filesystem::path& path);

/// FNV-1a 64 hash of the canonical form; stable under semantically
/// identical configs.
std::string config_hash(const sim::ScenarioConfig& config);

/// Executes the scenario and writes telemetry CSVs, the fault report file,
/// and the run manifest into outdir. A diverged run still flushes its
/// partial telemetry and manifest before the error is rethrown.
RunManifest run(const sim::ScenarioConfig& config, const std::filesystem::path& outdir,
                const std::string& scenario_path = "");

/// Writes the telemetry CSV set for an existing log.
void write_telemetry(const sim::TelemetryLog& log, const sim::ScenarioConfig& config,
                     const std::filesystem::path& outdir);

/// Writes the nominal prediction series (predict verb).
void write_prediction(const monitor::NominalPrediction& prediction,
                      const sim::ScenarioConfig& config,
                      const std::filesystem::path& outdir);

/// Emits the figure-analog data files from an in-memory log:
/// cost comparison, per-agent fault signals, and per-agent metric/threshold
/// tracks. Headers are always written, even for an empty log.
void emit_plots(const sim::TelemetryLog& log, const std::filesystem::path& outdir);

/// Same, reading a telemetry directory produced by run().
void emit_plots_from_dir(const std::filesystem::path& telemetry_dir,
                         const std::filesystem::path& outdir);

}  // namespace ifdi::io

#endif
