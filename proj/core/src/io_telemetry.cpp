/**
 * @file io_telemetry.cpp
 * @brief Telemetry CSV export, fault report file, manifest, and plot data.
 *
 * CSV files follow RFC 4180: CRLF record separators, a header row, no
 * quoting needed for the numeric payload.
 */

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ifdi/io.hpp"

namespace ifdi::io {

using nlohmann::json;

namespace {

constexpr const char* kCrlf = "\r\n";

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write file: " + path.string());
    }
    return out;
}

std::vector<int> agent_ids(const sim::ScenarioConfig& config) {
    std::vector<int> ids;
    for (const auto& a : config.agents) ids.push_back(a.id);
    return ids;
}

/// Splits one CSV record (no embedded quotes in our files).
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

double parse_double(const std::string& s) {
    if (s.empty()) return std::nan("");
    return std::stod(s);
}

}  // namespace

std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void write_telemetry(const sim::TelemetryLog& log, const sim::ScenarioConfig& config,
                     const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);

    {
        auto out = open_out(outdir / "states.csv");
        out << "t,agent,x,y,z,vx,vy,vz,bx,by,bz,visible_count,h_i" << kCrlf;
        for (const auto& rec : log.states) {
            out << format_double(rec.t) << ',' << rec.agent << ','
                << format_double(rec.state.position.x()) << ','
                << format_double(rec.state.position.y()) << ','
                << format_double(rec.state.position.z()) << ','
                << format_double(rec.state.velocity.x()) << ','
                << format_double(rec.state.velocity.y()) << ','
                << format_double(rec.state.velocity.z()) << ','
                << format_double(rec.pose.boresight.x()) << ','
                << format_double(rec.pose.boresight.y()) << ','
                << format_double(rec.pose.boresight.z()) << ','
                << rec.visible_count << ',' << format_double(rec.h_i) << kCrlf;
        }
    }

    {
        auto out = open_out(outdir / "fusion.csv");
        out << "t,total_h,prior_term";
        for (int id : agent_ids(config)) out << ",h_" << id;
        out << kCrlf;
        for (const auto& b : log.fusions) {
            out << format_double(b.timestamp) << ',' << format_double(b.total_h) << ','
                << format_double(b.prior_term);
            for (int id : agent_ids(config)) {
                const auto it = b.agent_terms.find(id);
                out << ',' << format_double(it == b.agent_terms.end() ? 0.0 : it->second);
            }
            out << kCrlf;
        }
    }

    {
        // Transmissions, metrics, thresholds, and verdicts share (t, agent)
        // ordering; baseline transmissions have no metric columns yet.
        auto out = open_out(outdir / "fdi.csv");
        out << "t,agent,h_received,h_pred,delta_h,delta_h_pred,ratio_x,metric,"
               "classification,tau,sample_count,epsilon,tau_fallback,flagged"
            << kCrlf;
        std::vector<const monitor::AgentVerdict*> verdicts;
        for (const auto& report : log.reports) {
            for (const auto& v : report.agents) verdicts.push_back(&v);
        }
        std::size_t mi = 0;
        for (const auto& tr : log.transmissions) {
            out << format_double(tr.t) << ',' << tr.agent << ','
                << format_double(tr.h_received) << ',' << format_double(tr.h_pred);
            if (mi < log.metrics.size() && mi < verdicts.size() &&
                log.metrics[mi].agent == tr.agent && log.metrics[mi].t == tr.t) {
                const auto& m = log.metrics[mi];
                const auto& th = log.thresholds[mi];
                const auto& v = *verdicts[mi];
                out << ',' << format_double(m.delta_h) << ','
                    << format_double(m.delta_h_pred) << ',' << format_double(m.ratio_x)
                    << ',' << format_double(m.metric) << ','
                    << monitor::classification_name(m.classification) << ','
                    << format_double(th.tau) << ',' << th.sample_count << ','
                    << format_double(th.epsilon) << ',' << (th.fallback ? 1 : 0) << ','
                    << (v.flagged ? 1 : 0);
                ++mi;
            } else {
                out << ",,,,,,,,,,";
            }
            out << kCrlf;
        }
    }

    {
        auto out = open_out(outdir / "global.csv");
        out << "t,h_real,h_nom,running_integral,integral_flag" << kCrlf;
        for (const auto& g : log.global) {
            out << format_double(g.t) << ',' << format_double(g.h_real) << ','
                << format_double(g.h_nom) << ',' << format_double(g.running_integral) << ','
                << (g.integral_flag ? 1 : 0) << kCrlf;
        }
    }

    {
        json reports = json::array();
        for (const auto& report : log.reports) {
            json agents = json::array();
            for (const auto& v : report.agents) {
                agents.push_back({{"agent", v.agent},
                                  {"classification", monitor::classification_name(v.classification)},
                                  {"metric", v.metric},
                                  {"tau", v.tau},
                                  {"flagged", v.flagged}});
            }
            reports.push_back({{"t", report.t},
                               {"global_integral_flag", report.global_integral_flag},
                               {"agents", agents}});
        }
        json doc;
        doc["reports"] = reports;
        doc["aborted"] = log.aborted;
        if (log.aborted) doc["abort_reason"] = log.abort_reason;
        auto out = open_out(outdir / "reports.json");
        out << doc.dump(2) << "\n";
    }
}

RunManifest run(const sim::ScenarioConfig& config, const std::filesystem::path& outdir,
                const std::string& scenario_path) {
    const auto start = std::chrono::steady_clock::now();
    const sim::TelemetryLog log = sim::run_scenario(config);
    write_telemetry(log, config, outdir);

    RunManifest manifest;
    manifest.scenario_path = scenario_path;
    manifest.output_dir = outdir.string();
    manifest.tool_version = kToolVersion;
    manifest.config_hash = config_hash(config);
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json doc = {{"scenario_path", manifest.scenario_path},
                {"output_dir", manifest.output_dir},
                {"tool_version", manifest.tool_version},
                {"config_hash", manifest.config_hash},
                {"wall_clock_seconds", manifest.wall_clock_seconds},
                {"aborted", log.aborted}};
    if (log.aborted) doc["abort_reason"] = log.abort_reason;
    auto out = open_out(outdir / "manifest.json");
    out << doc.dump(2) << "\n";

    if (log.aborted) {
        throw PropagationDivergedError("run aborted: " + log.abort_reason);
    }
    return manifest;
}

void write_prediction(const monitor::NominalPrediction& prediction,
                      const sim::ScenarioConfig& config,
                      const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    auto out = open_out(outdir / "prediction.csv");
    out << "t,h_nom";
    for (int id : agent_ids(config)) out << ",h_pred_" << id;
    out << kCrlf;
    for (std::size_t m = 0; m < prediction.times.size(); ++m) {
        out << format_double(prediction.times[m]) << ','
            << format_double(prediction.global_cost[m]);
        for (int id : agent_ids(config)) {
            out << ',' << format_double(prediction.agent_cost.at(id)[m]);
        }
        out << kCrlf;
    }
}

void emit_plots(const sim::TelemetryLog& log, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);

    {
        // Real-time vs. expected global cost.
        auto out = open_out(outdir / "plot_cost_comparison.csv");
        out << "t,h_real,h_nom" << kCrlf;
        for (const auto& g : log.global) {
            out << format_double(g.t) << ',' << format_double(g.h_real) << ','
                << format_double(g.h_nom) << kCrlf;
        }
    }

    // Per-agent fault signal and metric/threshold tracks.
    std::vector<int> ids;
    std::map<int, std::vector<const monitor::FaultMetricRecord*>> by_agent;
    std::map<int, std::vector<const monitor::ThresholdRecord*>> thresholds_by_agent;
    for (std::size_t k = 0; k < log.metrics.size(); ++k) {
        const auto& m = log.metrics[k];
        if (by_agent.find(m.agent) == by_agent.end()) ids.push_back(m.agent);
        by_agent[m.agent].push_back(&m);
        thresholds_by_agent[m.agent].push_back(&log.thresholds[k]);
    }
    std::sort(ids.begin(), ids.end());

    {
        auto out = open_out(outdir / "plot_fault_signals.csv");
        out << "t";
        for (int id : ids) out << ",metric_" << id;
        out << kCrlf;
        if (!ids.empty()) {
            const std::size_t ticks = by_agent[ids.front()].size();
            for (std::size_t m = 0; m < ticks; ++m) {
                out << format_double(by_agent[ids.front()][m]->t);
                for (int id : ids) out << ',' << format_double(by_agent[id][m]->metric);
                out << kCrlf;
            }
        }
    }

    for (int id : ids) {
        auto out = open_out(outdir / ("plot_threshold_agent_" + std::to_string(id) + ".csv"));
        out << "t,metric,tau" << kCrlf;
        const auto& metrics = by_agent[id];
        const auto& thresholds = thresholds_by_agent[id];
        for (std::size_t m = 0; m < metrics.size(); ++m) {
            out << format_double(metrics[m]->t) << ',' << format_double(metrics[m]->metric)
                << ',' << format_double(thresholds[m]->tau) << kCrlf;
        }
    }
}

void emit_plots_from_dir(const std::filesystem::path& telemetry_dir,
                         const std::filesystem::path& outdir) {
    sim::TelemetryLog log;

    {
        std::ifstream in(telemetry_dir / "global.csv");
        if (!in) {
            throw ParseError("cannot open " + (telemetry_dir / "global.csv").string());
        }
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty() || line == "\r") continue;
            const auto fields = split_csv(line);
            if (fields.size() < 5) {
                throw ParseError("global.csv: malformed record");
            }
            sim::GlobalCostRecord g;
            g.t = parse_double(fields[0]);
            g.h_real = parse_double(fields[1]);
            g.h_nom = parse_double(fields[2]);
            g.running_integral = parse_double(fields[3]);
            g.integral_flag = fields[4] == "1";
            log.global.push_back(g);
        }
    }

    {
        std::ifstream in(telemetry_dir / "fdi.csv");
        if (!in) {
            throw ParseError("cannot open " + (telemetry_dir / "fdi.csv").string());
        }
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty() || line == "\r") continue;
            const auto fields = split_csv(line);
            if (fields.size() < 14) {
                throw ParseError("fdi.csv: malformed record");
            }
            if (fields[7].empty()) continue;  // baseline transmission, no metric yet
            monitor::FaultMetricRecord m;
            m.t = parse_double(fields[0]);
            m.agent = static_cast<int>(std::stol(fields[1]));
            m.delta_h = parse_double(fields[4]);
            m.delta_h_pred = parse_double(fields[5]);
            m.ratio_x = parse_double(fields[6]);
            m.metric = parse_double(fields[7]);
            monitor::ThresholdRecord th;
            th.t = m.t;
            th.agent = m.agent;
            th.tau = parse_double(fields[9]);
            th.sample_count = static_cast<int>(std::stol(fields[10]));
            th.epsilon = parse_double(fields[11]);
            th.fallback = fields[12] == "1";
            log.metrics.push_back(m);
            log.thresholds.push_back(th);
        }
    }

    emit_plots(log, outdir);
}

}  // namespace ifdi::io
