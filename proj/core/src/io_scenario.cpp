/**
 * @file io_scenario.cpp
 * @brief Scenario JSON parsing, canonical serialization, and hashing.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ifdi/io.hpp"

namespace ifdi::io {

using nlohmann::json;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

/// Collects structural problems (wrong types, missing keys) so they can be
/// reported together with invariant violations.
struct Reader {
    std::vector<std::string> issues;

    void fail(const std::string& path, const std::string& what) {
        issues.push_back(path + ": " + what);
    }

    bool require_object(const json& j, const std::string& path) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        return true;
    }

    void check_keys(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
        if (!j.is_object()) return;
        for (const auto& [key, value] : j.items()) {
            bool known = false;
            for (const char* a : allowed) {
                if (key == a) {
                    known = true;
                    break;
                }
            }
            if (!known) {
                fail(path.empty() ? key : path + "." + key, "unrecognized field");
            }
        }
    }

    double get_number(const json& obj, const char* key, const std::string& path,
                      double fallback, bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(path, "missing required field");
            return fallback;
        }
        if (!obj[key].is_number()) {
            fail(path, "expected a number");
            return fallback;
        }
        return obj[key].get<double>();
    }

    std::int64_t get_integer(const json& obj, const char* key, const std::string& path,
                             std::int64_t fallback, bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(path, "missing required field");
            return fallback;
        }
        if (!obj[key].is_number_integer() && !obj[key].is_number_unsigned()) {
            fail(path, "expected an integer");
            return fallback;
        }
        return obj[key].get<std::int64_t>();
    }

    std::uint64_t get_seed(const json& obj, const char* key, const std::string& path) {
        if (!obj.contains(key)) return 0;
        if (!obj[key].is_number_integer() && !obj[key].is_number_unsigned()) {
            fail(path, "expected an integer");
            return 0;
        }
        return obj[key].get<std::uint64_t>();
    }

    std::string get_string(const json& obj, const char* key, const std::string& path,
                           const std::string& fallback, bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(path, "missing required field");
            return fallback;
        }
        if (!obj[key].is_string()) {
            fail(path, "expected a string");
            return fallback;
        }
        return obj[key].get<std::string>();
    }

    Eigen::Vector3d get_vec3(const json& obj, const char* key, const std::string& path,
                             const Eigen::Vector3d& fallback, bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(path, "missing required field");
            return fallback;
        }
        const json& a = obj[key];
        if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() ||
            !a[2].is_number()) {
            fail(path, "expected an array of 3 numbers");
            return fallback;
        }
        return Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
    }
};

std::vector<sense::PoiModel> generate_fibonacci_pois(const json& spec, Reader& r,
                                                     const sim::ScenarioConfig& config) {
    std::vector<sense::PoiModel> pois;
    if (!r.require_object(spec, "pois.fibonacci_sphere")) return pois;
    r.check_keys(spec, "pois.fibonacci_sphere", {"count", "importance", "prior_variance"});
    const auto count = r.get_integer(spec, "count", "pois.fibonacci_sphere.count", 0, true);
    const double importance =
        r.get_number(spec, "importance", "pois.fibonacci_sphere.importance", 1.0);
    const double prior =
        r.get_number(spec, "prior_variance", "pois.fibonacci_sphere.prior_variance", 1.0);
    if (count < 1) {
        r.fail("pois.fibonacci_sphere.count", "must be >= 1");
        return pois;
    }
    if (config.target.shape() != sense::TargetBody::Shape::Sphere) {
        r.fail("pois.fibonacci_sphere", "requires a sphere target");
        return pois;
    }

    const double radius = config.target.radius();
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    for (std::int64_t k = 0; k < count; ++k) {
        const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
        const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double angle = golden_angle * static_cast<double>(k);
        const Eigen::Vector3d unit(ring * std::cos(angle), ring * std::sin(angle), z);
        sense::PoiModel poi;
        poi.id = static_cast<int>(k);
        poi.position = radius * unit;
        poi.surface_normal = unit;
        poi.importance = importance;
        poi.prior_variance = prior;
        pois.push_back(poi);
    }
    return pois;
}

sim::ScenarioConfig config_from_json(const json& root, std::vector<std::string>& issues) {
    Reader r;
    sim::ScenarioConfig config;

    if (!root.is_object()) {
        issues.push_back("scenario: top level must be an object");
        return config;
    }
    r.check_keys(root, "",
                 {"environment", "target", "pois", "agents", "schedule", "sim_dt",
                  "horizon_orbits", "comm_radius", "master_seed", "faults", "fdi"});

    // environment: exactly one of mean_motion_n / orbit_period
    if (!root.contains("environment")) {
        r.fail("environment", "missing required section");
    } else if (r.require_object(root["environment"], "environment")) {
        const json& env = root["environment"];
        r.check_keys(env, "environment", {"mean_motion_n", "orbit_period"});
        const bool has_n = env.contains("mean_motion_n");
        const bool has_period = env.contains("orbit_period");
        if (has_n == has_period) {
            r.fail("environment", "give exactly one of mean_motion_n or orbit_period");
        } else if (has_n) {
            const double n = r.get_number(env, "mean_motion_n", "environment.mean_motion_n",
                                          0.0, true);
            if (n > 0.0) {
                config.environment = orbit::OrbitEnvironment::from_mean_motion(n);
            } else {
                config.environment.mean_motion_n = n;  // validate() names the field
            }
        } else {
            const double period =
                r.get_number(env, "orbit_period", "environment.orbit_period", 0.0, true);
            if (period > 0.0) {
                config.environment = orbit::OrbitEnvironment::from_period(period);
            } else {
                r.fail("environment.orbit_period", "must be > 0");
            }
        }
    }

    // target
    if (!root.contains("target")) {
        r.fail("target", "missing required section");
    } else if (r.require_object(root["target"], "target")) {
        const json& target = root["target"];
        const std::string shape = r.get_string(target, "shape", "target.shape", "sphere");
        if (shape == "sphere") {
            r.check_keys(target, "target", {"shape", "radius"});
            config.target = sense::TargetBody::sphere(
                r.get_number(target, "radius", "target.radius", 0.0, true));
        } else if (shape == "box") {
            r.check_keys(target, "target", {"shape", "half_extents"});
            config.target = sense::TargetBody::box(r.get_vec3(
                target, "half_extents", "target.half_extents", Eigen::Vector3d::Ones(), true));
        } else {
            r.fail("target.shape", "must be \"sphere\" or \"box\"");
        }
    }

    // POIs: explicit list or generator
    if (!root.contains("pois")) {
        r.fail("pois", "missing required section");
    } else if (root["pois"].is_object()) {
        r.check_keys(root["pois"], "pois", {"fibonacci_sphere"});
        if (root["pois"].contains("fibonacci_sphere")) {
            config.pois = generate_fibonacci_pois(root["pois"]["fibonacci_sphere"], r, config);
        } else {
            r.fail("pois", "object form must contain fibonacci_sphere");
        }
    } else if (root["pois"].is_array()) {
        for (std::size_t k = 0; k < root["pois"].size(); ++k) {
            const json& p = root["pois"][k];
            const std::string base = "pois[" + std::to_string(k) + "]";
            if (!r.require_object(p, base)) continue;
            r.check_keys(p, base,
                         {"id", "position", "surface_normal", "importance", "prior_variance"});
            sense::PoiModel poi;
            poi.id = static_cast<int>(r.get_integer(p, "id", base + ".id", 0, true));
            poi.position =
                r.get_vec3(p, "position", base + ".position", Eigen::Vector3d::Zero(), true);
            poi.surface_normal = r.get_vec3(p, "surface_normal", base + ".surface_normal",
                                            Eigen::Vector3d::UnitX(), true);
            poi.importance = r.get_number(p, "importance", base + ".importance", 1.0);
            poi.prior_variance =
                r.get_number(p, "prior_variance", base + ".prior_variance", 1.0);
            config.pois.push_back(poi);
        }
    } else {
        r.fail("pois", "expected an array or a generator object");
    }
    std::sort(config.pois.begin(), config.pois.end(),
              [](const sense::PoiModel& a, const sense::PoiModel& b) { return a.id < b.id; });

    // agents
    if (root.contains("agents")) {
        if (!root["agents"].is_array()) {
            r.fail("agents", "expected an array");
        } else {
            for (std::size_t k = 0; k < root["agents"].size(); ++k) {
                const json& a = root["agents"][k];
                const std::string base = "agents[" + std::to_string(k) + "]";
                if (!r.require_object(a, base)) continue;
                r.check_keys(a, base, {"id", "orbit", "camera"});
                sim::AgentConfig agent;
                agent.id = static_cast<int>(r.get_integer(a, "id", base + ".id", 0, true));
                if (a.contains("orbit") && r.require_object(a["orbit"], base + ".orbit")) {
                    const json& o = a["orbit"];
                    r.check_keys(o, base + ".orbit",
                                 {"radial_amplitude", "along_track_offset",
                                  "cross_track_amplitude", "phase_radial", "phase_cross"});
                    agent.orbit.radial_amplitude = r.get_number(
                        o, "radial_amplitude", base + ".orbit.radial_amplitude", 0.0);
                    agent.orbit.along_track_offset = r.get_number(
                        o, "along_track_offset", base + ".orbit.along_track_offset", 0.0);
                    agent.orbit.cross_track_amplitude = r.get_number(
                        o, "cross_track_amplitude", base + ".orbit.cross_track_amplitude", 0.0);
                    agent.orbit.phase_radial =
                        r.get_number(o, "phase_radial", base + ".orbit.phase_radial", 0.0);
                    agent.orbit.phase_cross =
                        r.get_number(o, "phase_cross", base + ".orbit.phase_cross", 0.0);
                } else {
                    r.fail(base + ".orbit", "missing required section");
                }
                if (a.contains("camera") && r.require_object(a["camera"], base + ".camera")) {
                    const json& c = a["camera"];
                    r.check_keys(c, base + ".camera",
                                 {"half_angle_fov", "max_range", "sigma_scale"});
                    agent.camera.half_angle_fov = r.get_number(
                        c, "half_angle_fov", base + ".camera.half_angle_fov", 0.0, true);
                    agent.camera.max_range =
                        r.get_number(c, "max_range", base + ".camera.max_range", 0.0, true);
                    agent.camera.sigma_scale =
                        r.get_number(c, "sigma_scale", base + ".camera.sigma_scale", 1.0);
                } else {
                    r.fail(base + ".camera", "missing required section");
                }
                config.agents.push_back(agent);
            }
        }
    }
    std::sort(config.agents.begin(), config.agents.end(),
              [](const sim::AgentConfig& a, const sim::AgentConfig& b) { return a.id < b.id; });

    // schedule: rates in Hz or periods in seconds
    if (root.contains("schedule")) {
        if (r.require_object(root["schedule"], "schedule")) {
            const json& s = root["schedule"];
            r.check_keys(s, "schedule",
                         {"omega_g", "omega_fdi", "fusion_period", "fdi_period"});
            if (s.contains("omega_g")) {
                config.schedule.omega_g = r.get_number(s, "omega_g", "schedule.omega_g", 0.0);
            } else if (s.contains("fusion_period")) {
                const double period =
                    r.get_number(s, "fusion_period", "schedule.fusion_period", 0.0);
                if (period > 0.0) config.schedule.omega_g = 1.0 / period;
                else r.fail("schedule.fusion_period", "must be > 0");
            } else {
                r.fail("schedule.fusion_period", "missing (or give omega_g)");
            }
            if (s.contains("omega_fdi")) {
                config.schedule.omega_fdi =
                    r.get_number(s, "omega_fdi", "schedule.omega_fdi", 0.0);
            } else if (s.contains("fdi_period")) {
                const double period = r.get_number(s, "fdi_period", "schedule.fdi_period", 0.0);
                if (period > 0.0) config.schedule.omega_fdi = 1.0 / period;
                else r.fail("schedule.fdi_period", "must be > 0");
            } else {
                r.fail("schedule.fdi_period", "missing (or give omega_fdi)");
            }
        }
    } else {
        // Defaults: fusion every 10 sim steps, FDI every 50.
        const double dt = config.resolved_dt();
        if (dt > 0.0) {
            config.schedule.omega_g = 1.0 / (10.0 * dt);
            config.schedule.omega_fdi = 1.0 / (50.0 * dt);
        }
    }

    config.sim_dt = r.get_number(root, "sim_dt", "sim_dt", 0.0);
    config.horizon_orbits = r.get_number(root, "horizon_orbits", "horizon_orbits", 2.0);
    config.comm_radius = r.get_number(root, "comm_radius", "comm_radius", 1.0e30);
    config.master_seed = r.get_seed(root, "master_seed", "master_seed");

    // faults
    if (root.contains("faults")) {
        if (!root["faults"].is_array()) {
            r.fail("faults", "expected an array");
        } else {
            for (std::size_t k = 0; k < root["faults"].size(); ++k) {
                const json& f = root["faults"][k];
                const std::string base = "faults[" + std::to_string(k) + "]";
                if (!r.require_object(f, base)) continue;
                r.check_keys(f, base,
                             {"target_agent", "kind", "onset_time", "magnitude", "rng_seed"});
                fault::FaultSpec spec;
                spec.target_agent =
                    static_cast<int>(r.get_integer(f, "target_agent", base + ".target_agent",
                                                   0, true));
                const std::string kind =
                    r.get_string(f, "kind", base + ".kind", "actuator-state", true);
                try {
                    spec.kind = fault::fault_kind_from_name(kind);
                } catch (const ParseError& e) {
                    r.fail(base + ".kind", e.what());
                }
                spec.onset_time = r.get_number(f, "onset_time", base + ".onset_time", 0.0);
                spec.magnitude = r.get_number(f, "magnitude", base + ".magnitude", 0.0, true);
                spec.rng_seed = r.get_seed(f, "rng_seed", base + ".rng_seed");
                config.faults.push_back(spec);
            }
        }
    }

    // FDI knobs
    if (root.contains("fdi")) {
        if (r.require_object(root["fdi"], "fdi")) {
            const json& f = root["fdi"];
            r.check_keys(f, "fdi",
                         {"epsilon", "epsilon_scale", "n_samples", "tau_floor",
                          "delta_threshold", "differencing"});
            if (f.contains("epsilon")) {
                config.fdi.epsilon = r.get_number(f, "epsilon", "fdi.epsilon", 0.0);
            }
            config.fdi.epsilon_scale =
                r.get_number(f, "epsilon_scale", "fdi.epsilon_scale", 0.005);
            config.fdi.n_samples =
                static_cast<int>(r.get_integer(f, "n_samples", "fdi.n_samples", 10));
            config.fdi.tau_floor = r.get_number(f, "tau_floor", "fdi.tau_floor", 0.05);
            config.fdi.delta_threshold =
                r.get_number(f, "delta_threshold", "fdi.delta_threshold", 0.1);
            const std::string mode =
                r.get_string(f, "differencing", "fdi.differencing", "measured");
            if (mode == "measured") {
                config.fdi.differencing = sim::Differencing::Measured;
            } else if (mode == "predicted") {
                config.fdi.differencing = sim::Differencing::Predicted;
            } else {
                r.fail("fdi.differencing", "must be \"measured\" or \"predicted\"");
            }
        }
    }

    issues = std::move(r.issues);
    return config;
}

}  // namespace

sim::ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file: " + path.string());
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("scenario parse error in " + path.string() + ": " + e.what());
    }

    std::vector<std::string> issues;
    sim::ScenarioConfig config = config_from_json(root, issues);
    const std::vector<std::string> invariant_issues = sim::validate(config);
    issues.insert(issues.end(), invariant_issues.begin(), invariant_issues.end());
    if (!issues.empty()) {
        throw ValidationError(issues);
    }
    return config;
}

std::string canonical_scenario_json(const sim::ScenarioConfig& config) {
    json root;

    root["environment"]["mean_motion_n"] = config.environment.mean_motion_n;

    if (config.target.shape() == sense::TargetBody::Shape::Sphere) {
        root["target"] = {{"shape", "sphere"}, {"radius", config.target.radius()}};
    } else {
        const Eigen::Vector3d& h = config.target.half_extents();
        root["target"] = {{"shape", "box"}, {"half_extents", {h.x(), h.y(), h.z()}}};
    }

    root["pois"] = json::array();
    for (const sense::PoiModel& p : config.pois) {
        root["pois"].push_back(
            {{"id", p.id},
             {"position", {p.position.x(), p.position.y(), p.position.z()}},
             {"surface_normal",
              {p.surface_normal.x(), p.surface_normal.y(), p.surface_normal.z()}},
             {"importance", p.importance},
             {"prior_variance", p.prior_variance}});
    }

    root["agents"] = json::array();
    for (const sim::AgentConfig& a : config.agents) {
        root["agents"].push_back(
            {{"id", a.id},
             {"orbit",
              {{"radial_amplitude", a.orbit.radial_amplitude},
               {"along_track_offset", a.orbit.along_track_offset},
               {"cross_track_amplitude", a.orbit.cross_track_amplitude},
               {"phase_radial", a.orbit.phase_radial},
               {"phase_cross", a.orbit.phase_cross}}},
             {"camera",
              {{"half_angle_fov", a.camera.half_angle_fov},
               {"max_range", a.camera.max_range},
               {"sigma_scale", a.camera.sigma_scale}}}});
    }

    root["schedule"] = {{"omega_g", config.schedule.omega_g},
                        {"omega_fdi", config.schedule.omega_fdi}};
    root["sim_dt"] = config.sim_dt;
    root["horizon_orbits"] = config.horizon_orbits;
    root["comm_radius"] = config.comm_radius;
    root["master_seed"] = config.master_seed;

    root["faults"] = json::array();
    for (const fault::FaultSpec& f : config.faults) {
        root["faults"].push_back({{"target_agent", f.target_agent},
                                  {"kind", fault::fault_kind_name(f.kind)},
                                  {"onset_time", f.onset_time},
                                  {"magnitude", f.magnitude},
                                  {"rng_seed", f.rng_seed}});
    }

    root["fdi"] = {{"epsilon_scale", config.fdi.epsilon_scale},
                   {"n_samples", config.fdi.n_samples},
                   {"tau_floor", config.fdi.tau_floor},
                   {"delta_threshold", config.fdi.delta_threshold},
                   {"differencing", config.fdi.differencing == sim::Differencing::Measured
                                        ? "measured"
                                        : "predicted"}};
    if (config.fdi.epsilon.has_value()) {
        root["fdi"]["epsilon"] = *config.fdi.epsilon;
    }

    return root.dump(2) + "\n";
}

void save_scenario(const sim::ScenarioConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write scenario file: " + path.string());
    }
    out << canonical_scenario_json(config);
}

std::string config_hash(const sim::ScenarioConfig& config) {
    const std::string canon = canonical_scenario_json(config);
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char c : canon) {
        hash ^= c;
        hash *= 0x100000001B3ull;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << hash;
    return os.str();
}

}  // namespace ifdi::io
