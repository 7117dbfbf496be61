/**
 * @file scenario_fixtures.hpp
 * @brief Desk-scale scenarios shared by the monitor, simulation, and
 *        acceptance tests.
 */

#ifndef IFDI_TESTS_SCENARIO_FIXTURES_HPP
#define IFDI_TESTS_SCENARIO_FIXTURES_HPP

#include <cmath>
#include <vector>

#include "ifdi/scenario.hpp"

namespace fixtures {

using namespace ifdi;

inline std::vector<sense::PoiModel> fibonacci_pois(int count, double radius,
                                                   double importance,
                                                   double prior_variance) {
    std::vector<sense::PoiModel> pois;
    const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / count;
        const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double angle = golden_angle * k;
        const Eigen::Vector3d unit(ring * std::cos(angle), ring * std::sin(angle), z);
        sense::PoiModel poi;
        poi.id = k;
        poi.position = radius * unit;
        poi.surface_normal = unit;
        poi.importance = importance;
        poi.prior_variance = prior_variance;
        pois.push_back(poi);
    }
    return pois;
}

inline sim::AgentConfig make_agent(int id, double radial, double along_offset,
                                   double cross, double phase_radial, double phase_cross,
                                   double fov = 0.06, double range = 400.0) {
    sim::AgentConfig a;
    a.id = id;
    a.orbit.radial_amplitude = radial;
    a.orbit.along_track_offset = along_offset;
    a.orbit.cross_track_amplitude = cross;
    a.orbit.phase_radial = phase_radial;
    a.orbit.phase_cross = phase_cross;
    a.camera.half_angle_fov = fov;
    a.camera.max_range = range;
    a.camera.sigma_scale = 1.0;
    return a;
}

/// Four phase-spread observers on 2:1 CW ellipses around a 5 m sphere with
/// 150 POIs; fusion every 30 s, FDI every 150 s, 2-orbit horizon.
inline sim::ScenarioConfig baseline_scenario() {
    sim::ScenarioConfig cfg;
    cfg.environment = orbit::OrbitEnvironment::from_period(6000.0);
    cfg.target = sense::TargetBody::sphere(5.0);
    cfg.pois = fibonacci_pois(150, 5.0, 1.0, 1000.0);
    cfg.agents = {make_agent(0, 45.0, 0.0, 8.0, 0.0, 0.3),
                  make_agent(1, 55.0, 0.0, 12.0, 1.5707963267948966, 1.2),
                  make_agent(2, 50.0, 0.0, 10.0, 3.141592653589793, 2.1),
                  make_agent(3, 60.0, 0.0, 6.0, 4.71238898038469, 0.9)};
    cfg.schedule.omega_g = 1.0 / 30.0;
    cfg.schedule.omega_fdi = 1.0 / 150.0;
    cfg.sim_dt = 3.0;
    cfg.horizon_orbits = 2.0;
    cfg.comm_radius = 1.0e9;
    cfg.fdi.epsilon = 1.0;
    cfg.fdi.n_samples = 10;
    cfg.fdi.tau_floor = 0.05;
    cfg.fdi.delta_threshold = 1000.0;
    cfg.master_seed = 20240901;
    return cfg;
}

/// Actuator-state fault on agent 0, tuned so the rogue drift improves the
/// global cost (real below nominal) while clearly separating the fault
/// signal of agent 0: the agent starts on a far along-track station and the
/// velocity noise walks it toward the target.
inline sim::ScenarioConfig state_fault_scenario() {
    sim::ScenarioConfig cfg = baseline_scenario();
    cfg.agents[0] = make_agent(0, 12.0, 160.0, 4.0, 0.0, 0.3);
    fault::FaultSpec f;
    f.target_agent = 0;
    f.kind = fault::FaultKind::ActuatorState;
    f.onset_time = 9000.0;
    f.magnitude = 0.002;
    cfg.faults = {f};
    cfg.fdi.epsilon.reset();           // derived: magnitude * window^2 * scale
    cfg.fdi.epsilon_scale = 0.0444;    // -> ~2.0 m neighborhood
    cfg.master_seed = 15;
    return cfg;
}

/// Actuator-pointing fault on agent 2: the sensor scatter throws the
/// footprint off the target, deteriorating global performance.
inline sim::ScenarioConfig pointing_fault_scenario() {
    sim::ScenarioConfig cfg = baseline_scenario();
    fault::FaultSpec f;
    f.target_agent = 2;
    f.kind = fault::FaultKind::ActuatorPointing;
    f.onset_time = 3000.0;
    f.magnitude = 0.35;
    cfg.faults = {f};
    cfg.fdi.epsilon.reset();
    cfg.fdi.epsilon_scale = 0.000254;  // -> ~2.0 m neighborhood
    cfg.master_seed = 11;
    return cfg;
}

/// Baseline shrunk to a fraction of an orbit for fast unit tests.
inline sim::ScenarioConfig short_scenario(double horizon_orbits = 0.05) {
    sim::ScenarioConfig cfg = baseline_scenario();
    cfg.horizon_orbits = horizon_orbits;
    return cfg;
}

}  // namespace fixtures

#endif
