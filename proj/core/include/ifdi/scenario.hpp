/**
 * @file scenario.hpp
 * @brief Full experiment description: agents, orbits, POIs, faults,
 *        cadences, and FDI knobs.
 */

#ifndef IFDI_SCENARIO_HPP
#define IFDI_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifdi/fault.hpp"
#include "ifdi/geometry.hpp"
#include "ifdi/info_cost.hpp"
#include "ifdi/orbit.hpp"

namespace ifdi::sim {

/// One observer spacecraft: assigned orbit plus onboard camera.
struct AgentConfig {
    int id = 0;
    orbit::ProParameters orbit;
    sense::CameraModel camera;
};

/// How the FDI differencing window picks its "previous" cost sample.
enum class Differencing {
    Measured,   // previous value as received from the agent (as written)
    Predicted,  // previous value from the nominal prediction
};

/// Monitor tuning knobs.
struct FdiConfig {
    /// Radius of the aim-point neighborhood on the target surface [m].
    /// When unset it is derived from the largest actuator fault magnitude
    /// as magnitude * window^2 * epsilon_scale.
    std::optional<double> epsilon;
    double epsilon_scale = 0.005;
    int n_samples = 10;
    double tau_floor = 0.05;
    double delta_threshold = 0.1;  // global integral test level
    Differencing differencing = Differencing::Measured;
};

struct ScenarioConfig {
    orbit::OrbitEnvironment environment;
    std::vector<AgentConfig> agents;          // ascending unique ids
    std::vector<sense::PoiModel> pois;        // ascending unique ids
    sense::TargetBody target = sense::TargetBody::sphere(1.0);
    cost::FusionSchedule schedule;
    double sim_dt = 0.0;                      // [s]; 0 means period/2000
    double horizon_orbits = 2.0;
    std::vector<fault::FaultSpec> faults;
    double comm_radius = 1.0e30;              // [m]
    FdiConfig fdi;
    std::uint64_t master_seed = 0;

    /// Simulation step, with the period/2000 default applied.
    double resolved_dt() const;
    /// Steps between fusion ticks (1/omega_g in sim steps).
    long fusion_stride() const;
    /// Steps between FDI ticks (1/omega_fdi in sim steps).
    long fdi_stride() const;
    /// Total sim steps over the horizon.
    long total_steps() const;
    /// Explicit epsilon, or the derived default. Zero when underivable.
    double resolved_epsilon() const;

    const AgentConfig* find_agent(int id) const;
    const sense::PoiModel* find_poi(int id) const;
};

/// Checks every type invariant and returns all violations with field paths.
/// An empty result means the scenario is valid.
std::vector<std::string> validate(const ScenarioConfig& config);

}  // namespace ifdi::sim

#endif
