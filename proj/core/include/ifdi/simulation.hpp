/**
 * @file simulation.hpp
 * @brief Closed-loop simulation: propagation, pointing, fault injection,
 *        cost fusion at omega_g, and FDI evaluation at omega_fdi.
 */

#ifndef IFDI_SIMULATION_HPP
#define IFDI_SIMULATION_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ifdi/monitor.hpp"
#include "ifdi/scenario.hpp"

namespace ifdi::sim {

/// Time-varying communication topology over the agents.
/// edge(i,j) iff the agents are within comm_radius of each other.
struct CommGraph {
    double t = 0.0;
    std::vector<int> ids;                      // ascending agent ids
    std::vector<std::vector<bool>> adjacency;  // symmetric, no self-edges

    bool edge(int id_a, int id_b) const;
};

CommGraph build_comm_graph(double t, const std::map<int, Eigen::Vector3d>& positions,
                           double comm_radius);

/// Agents that can reach the central monitor (at the target origin),
/// directly or by relaying through in-range neighbors.
std::set<int> monitor_connected(const CommGraph& graph,
                                const std::map<int, Eigen::Vector3d>& positions,
                                double comm_radius);

/// Per-step agent telemetry. h_i is the instantaneous contribution using
/// the psi table held from the latest fusion.
struct AgentStateRecord {
    double t = 0.0;
    int agent = 0;
    orbit::RelativeState state;
    sense::Pose pose;
    int visible_count = 0;
    double h_i = 0.0;
};

/// H_i values as received by the monitor at an FDI tick, next to the
/// prediction they are compared against.
struct FdiTransmissionRecord {
    double t = 0.0;
    int agent = 0;
    double h_received = 0.0;
    double h_pred = 0.0;
};

/// Global cost track at FDI ticks, with the running integral test.
struct GlobalCostRecord {
    double t = 0.0;
    double h_real = 0.0;
    double h_nom = 0.0;
    double running_integral = 0.0;
    bool integral_flag = false;
};

/// Append-only record of one run. Timestamps are non-decreasing within each
/// stream.
struct TelemetryLog {
    std::vector<AgentStateRecord> states;
    std::vector<cost::CostBreakdown> fusions;
    std::vector<FdiTransmissionRecord> transmissions;
    std::vector<monitor::FaultMetricRecord> metrics;
    std::vector<monitor::ThresholdRecord> thresholds;
    std::vector<monitor::FaultReport> reports;
    std::vector<GlobalCostRecord> global;
    bool aborted = false;
    std::string abort_reason;
};

/**
 * @brief Mutable simulation state driven by the tick loop.
 *
 * Deterministic: agent iteration is in ascending id order, every fault spec
 * owns its own seeded stream, and all reductions run in fixed order.
 */
class World {
public:
    /// Builds the t = 0 world: agents on their PROs, sensors pointed at the
    /// highest-prior-variance reachable POI. With faults_enabled = false the
    /// fault list is ignored (nominal replica).
    World(ScenarioConfig config, bool faults_enabled);

    double time() const { return time_; }
    long step_index() const { return step_index_; }
    const ScenarioConfig& config() const { return config_; }

    /**
     * @brief Advances every agent by dt: state fault on the velocity, RK4
     *        propagation with u = 0, re-pointing at the maximum-variance
     *        reachable POI of the assignment-phase model, pointing fault.
     */
    void step(double dt);

    /**
     * @brief Fusion tick: rebuilds the sigma table from the current poses of
     *        monitor-connected agents (inspection-sensor faults applied),
     *        recomputes psi, and decomposes the cost. Disconnected agents
     *        keep their last-known H_i in the monitor view.
     */
    cost::CostBreakdown fusion_step();

    /// Baseline FDI transmission at t = 0 (no metric evaluated yet).
    void fdi_baseline(const monitor::NominalPrediction& prediction);

    /**
     * @brief FDI tick: applies comm faults to the transmitted H_i values,
     *        evaluates the fault metric, classification, adaptive threshold,
     *        per-agent detection, and the global integral test.
     */
    monitor::FaultReport fdi_step(const monitor::NominalPrediction& prediction);

    /// Appends one per-agent state record at the current time.
    void record_tick();

    // Snapshot accessors (latest fusion).
    double monitor_global_cost() const;
    const std::map<int, double>& monitor_view_costs() const { return view_h_; }
    const std::map<int, double>& held_psi() const { return held_psi_; }
    const std::set<int>& fusion_visible(int agent) const;
    int fusion_target_poi(int agent) const;
    const Eigen::Vector3d& fusion_position(int agent) const;
    const orbit::RelativeState& agent_state(int agent) const;
    const sense::Pose& agent_pose(int agent) const;

    TelemetryLog& log() { return log_; }
    const TelemetryLog& log() const { return log_; }

private:
    struct FaultChannel {
        fault::FaultSpec spec;
        fault::FaultRng rng;
    };

    struct AgentRuntime {
        AgentConfig cfg;
        orbit::RelativeState state;
        sense::Pose pose;
        int current_target_poi = -1;
        std::vector<FaultChannel> state_faults;
        std::vector<FaultChannel> pointing_faults;
        std::vector<fault::FaultSpec> sensor_faults;
        std::vector<FaultChannel> comm_faults;
        // Latest fusion snapshot for this agent.
        std::set<int> fusion_visible;
        int fusion_target = -1;
        Eigen::Vector3d fusion_position = Eigen::Vector3d::Zero();
    };

    void point_agent(AgentRuntime& agent, double t);
    std::map<int, Eigen::Vector3d> positions() const;
    std::map<int, double> transmit(double t);
    double apply_sensor_faults(const AgentRuntime& agent, double t, double sigma_value) const;
    AgentRuntime& agent_ref(int agent);
    const AgentRuntime& agent_ref(int agent) const;

    ScenarioConfig config_;
    double dt_ = 0.0;
    double time_ = 0.0;
    long step_index_ = 0;
    std::size_t fdi_tick_ = 0;

    std::vector<AgentRuntime> agents_;  // ascending id
    std::map<int, double> held_psi_;    // poi -> psi from latest fusion
    std::map<int, double> view_h_;      // agent -> monitor-view H_i
    std::map<int, double> last_received_;
    double last_prior_term_ = 0.0;

    std::vector<double> fdi_times_;
    std::vector<double> h_real_series_;
    std::vector<double> h_nom_series_;

    TelemetryLog log_;
};

/**
 * @brief Full experiment: nominal prediction, then the live horizon with
 *        faults, interleaving step / fusion / FDI per the configured
 *        cadences. On a propagation failure the partial log is returned
 *        with `aborted` set.
 */
TelemetryLog run_scenario(const ScenarioConfig& config);

}  // namespace ifdi::sim

#endif
