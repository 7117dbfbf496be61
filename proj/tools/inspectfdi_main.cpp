/**
 * @file inspectfdi_main.cpp
 * @brief Command-line front end: validate, run, predict, plots.
 *
 * Exit codes: 0 success, 1 scenario validation/parse failure, 2 runtime
 * failure. INSPECTFDI_OUT, when set, overrides the output directory.
 */

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ifdi/io.hpp"

namespace {

std::string resolve_outdir(const std::string& cli_value) {
    if (const char* env = std::getenv("INSPECTFDI_OUT")) {
        return env;
    }
    return cli_value;
}

int cmd_validate(const std::string& scenario_path) {
    const auto config = ifdi::io::load_scenario(scenario_path);
    std::cout << "scenario OK: " << config.agents.size() << " agents, "
              << config.pois.size() << " POIs, horizon " << config.horizon_orbits
              << " orbits, hash " << ifdi::io::config_hash(config) << "\n";
    return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& outdir,
            bool seed_given, std::uint64_t seed) {
    auto config = ifdi::io::load_scenario(scenario_path);
    if (seed_given) {
        config.master_seed = seed;
    }
    const auto manifest = ifdi::io::run(config, outdir, scenario_path);
    std::cout << "run complete: telemetry in " << manifest.output_dir << " ("
              << manifest.wall_clock_seconds << " s, config " << manifest.config_hash
              << ")\n";
    return 0;
}

int cmd_predict(const std::string& scenario_path, const std::string& outdir) {
    const auto config = ifdi::io::load_scenario(scenario_path);
    const auto prediction = ifdi::monitor::predict_nominal(config);
    ifdi::io::write_prediction(prediction, config, outdir);
    std::cout << "prediction written: " << prediction.times.size() << " FDI ticks over "
              << prediction.horizon_end << " s\n";
    return 0;
}

int cmd_plots(const std::string& telemetry_dir) {
    ifdi::io::emit_plots_from_dir(telemetry_dir, telemetry_dir);
    std::cout << "plot data written to " << telemetry_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-spacecraft collaborative-inspection simulator with a "
                 "global-task-aware FDI monitor"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string outdir = "out";
    std::string telemetry_dir;
    std::uint64_t seed = 0;

    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
    validate_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write telemetry");
    run_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run_cmd->add_option("--out", outdir, "Output directory");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the master seed");

    auto* predict_cmd =
        app.add_subcommand("predict", "Write the nominal (fault-free) prediction only");
    predict_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    predict_cmd->add_option("--out", outdir, "Output directory");

    auto* plots_cmd =
        app.add_subcommand("plots", "Emit figure-analog data files from telemetry");
    plots_cmd->add_option("telemetry-dir", telemetry_dir, "Directory written by run")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            return cmd_validate(scenario_path);
        }
        if (run_cmd->parsed()) {
            return cmd_run(scenario_path, resolve_outdir(outdir), seed_opt->count() > 0,
                           seed);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(scenario_path, resolve_outdir(outdir));
        }
        if (plots_cmd->parsed()) {
            return cmd_plots(telemetry_dir);
        }
    } catch (const ifdi::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const ifdi::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const ifdi::Error& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
