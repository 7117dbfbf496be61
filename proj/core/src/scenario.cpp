/**
 * @file scenario.cpp
 * @brief Scenario derived quantities and invariant validation.
 */

#include "ifdi/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace ifdi::sim {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

long stride_for_rate(double rate_hz, double dt) {
    return std::lround(1.0 / (rate_hz * dt));
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

double ScenarioConfig::resolved_dt() const {
    if (sim_dt > 0.0) return sim_dt;
    return environment.orbit_period / 2000.0;
}

long ScenarioConfig::fusion_stride() const {
    return stride_for_rate(schedule.omega_g, resolved_dt());
}

long ScenarioConfig::fdi_stride() const {
    return stride_for_rate(schedule.omega_fdi, resolved_dt());
}

long ScenarioConfig::total_steps() const {
    return std::lround(horizon_orbits * environment.orbit_period / resolved_dt());
}

double ScenarioConfig::resolved_epsilon() const {
    if (fdi.epsilon.has_value()) return *fdi.epsilon;
    double max_magnitude = 0.0;
    for (const auto& f : faults) {
        if (f.kind == fault::FaultKind::ActuatorState ||
            f.kind == fault::FaultKind::ActuatorPointing) {
            max_magnitude = std::max(max_magnitude, f.magnitude);
        }
    }
    if (max_magnitude <= 0.0) return 0.0;
    const double window = 1.0 / schedule.omega_fdi;
    return max_magnitude * window * window * fdi.epsilon_scale;
}

const AgentConfig* ScenarioConfig::find_agent(int id) const {
    for (const auto& a : agents) {
        if (a.id == id) return &a;
    }
    return nullptr;
}

const sense::PoiModel* ScenarioConfig::find_poi(int id) const {
    for (const auto& p : pois) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

std::vector<std::string> validate(const ScenarioConfig& config) {
    std::vector<std::string> issues;
    auto fail = [&](const std::string& path, const std::string& what) {
        issues.push_back(path + ": " + what);
    };

    // environment
    const auto& env = config.environment;
    if (!(env.mean_motion_n > 0.0) || !std::isfinite(env.mean_motion_n)) {
        fail("environment.mean_motion_n", "must be finite and > 0 (got " +
                                              fmt(env.mean_motion_n) + ")");
    } else if (std::abs(env.orbit_period * env.mean_motion_n - 2.0 * kPi) >
               1.0e-12 * 2.0 * kPi) {
        fail("environment.orbit_period", "inconsistent with mean_motion_n (period*n != 2*pi)");
    }

    // agents
    std::set<int> agent_ids;
    for (std::size_t k = 0; k < config.agents.size(); ++k) {
        const AgentConfig& a = config.agents[k];
        const std::string base = "agents[" + std::to_string(k) + "]";
        if (!agent_ids.insert(a.id).second) {
            fail(base + ".id", "duplicate agent id " + std::to_string(a.id));
        }
        if (a.orbit.radial_amplitude < 0.0) {
            fail(base + ".orbit.radial_amplitude", "must be >= 0");
        }
        if (a.orbit.cross_track_amplitude < 0.0) {
            fail(base + ".orbit.cross_track_amplitude", "must be >= 0");
        }
        if (a.orbit.radial_amplitude == 0.0 && a.orbit.cross_track_amplitude == 0.0 &&
            a.orbit.along_track_offset == 0.0) {
            fail(base + ".orbit", "degenerate orbit fixed at the target origin");
        } else if (config.environment.mean_motion_n > 0.0 &&
                   config.target.signed_surface_distance(
                       orbit::pro_state(a.orbit, config.environment, 0.0).position) <=
                       0.0) {
            fail(base + ".orbit", "starts inside the target occluder");
        }
        if (!(a.camera.half_angle_fov > 0.0 && a.camera.half_angle_fov < kPi / 2.0)) {
            fail(base + ".camera.half_angle_fov", "must be in (0, pi/2)");
        }
        if (!(a.camera.max_range > 0.0)) {
            fail(base + ".camera.max_range", "must be > 0");
        }
        if (!(a.camera.sigma_scale > 0.0)) {
            fail(base + ".camera.sigma_scale", "must be > 0");
        }
    }

    // POIs
    std::set<int> poi_ids;
    for (std::size_t k = 0; k < config.pois.size(); ++k) {
        const sense::PoiModel& p = config.pois[k];
        const std::string base = "pois[" + std::to_string(k) + "]";
        if (!poi_ids.insert(p.id).second) {
            fail(base + ".id", "duplicate poi id " + std::to_string(p.id));
        }
        if (p.importance < 0.0) {
            fail(base + ".importance", "must be >= 0");
        }
        if (!(p.prior_variance > 0.0)) {
            fail(base + ".prior_variance", "must be > 0");
        }
        if (std::abs(p.surface_normal.norm() - 1.0) > 1.0e-9) {
            fail(base + ".surface_normal", "must be unit length within 1e-9");
        }
        if (config.target.signed_surface_distance(p.position) < -1.0e-6) {
            fail(base + ".position", "lies inside the target occluder");
        }
    }

    // target
    if (config.target.shape() == sense::TargetBody::Shape::Sphere) {
        if (!(config.target.radius() > 0.0)) {
            fail("target.radius", "must be > 0");
        }
    } else if (!(config.target.half_extents().minCoeff() > 0.0)) {
        fail("target.half_extents", "all components must be > 0");
    }

    // schedule and steps
    const double dt = config.resolved_dt();
    if (!(dt > 0.0)) {
        fail("sim_dt", "must be > 0");
    }
    if (!(config.horizon_orbits > 0.0)) {
        fail("horizon_orbits", "must be > 0");
    }
    if (!(config.schedule.omega_fdi > 0.0)) {
        fail("schedule.omega_fdi", "must be > 0");
    } else if (config.schedule.omega_g < config.schedule.omega_fdi) {
        fail("schedule.omega_g", "fusion rate must be >= FDI rate");
    }
    if (dt > 0.0 && config.schedule.omega_g > 0.0 && config.schedule.omega_fdi > 0.0) {
        for (const auto& [name, rate] :
             {std::pair<const char*, double>{"schedule.omega_g", config.schedule.omega_g},
              {"schedule.omega_fdi", config.schedule.omega_fdi}}) {
            const double period = 1.0 / rate;
            const long stride = std::lround(period / dt);
            if (stride < 1 || std::abs(stride * dt - period) > 1.0e-9 * period) {
                fail(name, "period " + fmt(period) + " s is not a whole number of sim steps");
            }
        }
    }

    if (!(config.comm_radius > 0.0)) {
        fail("comm_radius", "must be > 0");
    }

    // FDI knobs
    if (config.fdi.n_samples < 1) {
        fail("fdi.n_samples", "must be >= 1");
    }
    if (config.fdi.tau_floor < 0.0) {
        fail("fdi.tau_floor", "must be >= 0");
    }
    if (config.fdi.epsilon.has_value() && !(*config.fdi.epsilon > 0.0)) {
        fail("fdi.epsilon", "must be > 0 when given");
    }
    if (!(config.fdi.epsilon_scale > 0.0)) {
        fail("fdi.epsilon_scale", "must be > 0");
    }
    if (!config.agents.empty() && config.resolved_epsilon() <= 0.0) {
        fail("fdi.epsilon", "not set and not derivable (no actuator fault with magnitude > 0)");
    }

    // faults
    for (std::size_t k = 0; k < config.faults.size(); ++k) {
        const fault::FaultSpec& f = config.faults[k];
        const std::string base = "faults[" + std::to_string(k) + "]";
        if (config.find_agent(f.target_agent) == nullptr) {
            fail(base + ".target_agent", "unknown agent id " + std::to_string(f.target_agent));
        }
        if (f.onset_time < 0.0) {
            fail(base + ".onset_time", "must be >= 0");
        }
        if (f.magnitude < 0.0) {
            fail(base + ".magnitude", "must be >= 0");
        }
    }

    return issues;
}

}  // namespace ifdi::sim
