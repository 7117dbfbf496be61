/**
 * @file simulation.cpp
 * @brief World stepping, fusion, FDI evaluation, and the scenario loop.
 */

#include "ifdi/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace ifdi::sim {

namespace {

/// Range, facing, and occlusion checks only: could the POI be seen if the
/// sensor pointed straight at it.
bool reachable(const Eigen::Vector3d& position, const sense::CameraModel& camera,
               const sense::PoiModel& poi, const sense::TargetBody& body) {
    const Eigen::Vector3d to_poi = poi.position - position;
    const double dist2 = to_poi.squaredNorm();
    if (dist2 == 0.0) return false;
    if (dist2 > camera.max_range * camera.max_range) return false;
    if (poi.surface_normal.dot(position - poi.position) <= 0.0) return false;
    return !body.blocks_segment(position, poi.position);
}

}  // namespace

bool CommGraph::edge(int id_a, int id_b) const {
    const auto ia = std::lower_bound(ids.begin(), ids.end(), id_a);
    const auto ib = std::lower_bound(ids.begin(), ids.end(), id_b);
    if (ia == ids.end() || *ia != id_a || ib == ids.end() || *ib != id_b) {
        return false;
    }
    return adjacency[static_cast<std::size_t>(ia - ids.begin())]
                    [static_cast<std::size_t>(ib - ids.begin())];
}

CommGraph build_comm_graph(double t, const std::map<int, Eigen::Vector3d>& positions,
                           double comm_radius) {
    CommGraph graph;
    graph.t = t;
    for (const auto& [id, pos] : positions) {
        graph.ids.push_back(id);
    }
    const std::size_t n = graph.ids.size();
    graph.adjacency.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist =
                (positions.at(graph.ids[i]) - positions.at(graph.ids[j])).norm();
            const bool within = dist <= comm_radius;
            graph.adjacency[i][j] = within;
            graph.adjacency[j][i] = within;
        }
    }
    return graph;
}

std::set<int> monitor_connected(const CommGraph& graph,
                                const std::map<int, Eigen::Vector3d>& positions,
                                double comm_radius) {
    std::set<int> connected;
    std::deque<std::size_t> frontier;
    const std::size_t n = graph.ids.size();
    // Seed with agents that reach the monitor at the origin directly.
    for (std::size_t i = 0; i < n; ++i) {
        if (positions.at(graph.ids[i]).norm() <= comm_radius) {
            connected.insert(graph.ids[i]);
            frontier.push_back(i);
        }
    }
    // Relay through in-range neighbors.
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop_front();
        for (std::size_t j = 0; j < n; ++j) {
            if (graph.adjacency[i][j] && connected.insert(graph.ids[j]).second) {
                frontier.push_back(j);
            }
        }
    }
    return connected;
}

World::World(ScenarioConfig config, bool faults_enabled)
    : config_(std::move(config)), dt_(config_.resolved_dt()) {
    agents_.reserve(config_.agents.size());
    for (const AgentConfig& cfg : config_.agents) {
        AgentRuntime a;
        a.cfg = cfg;
        a.state = orbit::pro_state(cfg.orbit, config_.environment, 0.0);
        a.pose.position = a.state.position;
        a.pose.boresight = (-a.state.position).normalized();
        agents_.push_back(std::move(a));
    }
    std::sort(agents_.begin(), agents_.end(),
              [](const AgentRuntime& x, const AgentRuntime& y) { return x.cfg.id < y.cfg.id; });

    if (faults_enabled) {
        for (const fault::FaultSpec& spec : config_.faults) {
            fault::FaultSpec resolved = spec;
            if (resolved.rng_seed == 0) {
                resolved.rng_seed =
                    fault::derive_fault_seed(config_.master_seed, spec.target_agent, spec.kind);
            }
            for (AgentRuntime& a : agents_) {
                if (a.cfg.id != resolved.target_agent) continue;
                FaultChannel channel{resolved, fault::FaultRng(resolved.rng_seed)};
                switch (resolved.kind) {
                    case fault::FaultKind::ActuatorState:
                        a.state_faults.push_back(std::move(channel));
                        break;
                    case fault::FaultKind::ActuatorPointing:
                        a.pointing_faults.push_back(std::move(channel));
                        break;
                    case fault::FaultKind::InspectionSensor:
                        a.sensor_faults.push_back(resolved);
                        break;
                    case fault::FaultKind::SpuriousComm:
                        a.comm_faults.push_back(std::move(channel));
                        break;
                }
            }
        }
    }

    for (const sense::PoiModel& poi : config_.pois) {
        held_psi_[poi.id] = poi.prior_variance * poi.prior_variance;
        last_prior_term_ += poi.importance * held_psi_[poi.id] / poi.prior_variance;
    }
    for (AgentRuntime& a : agents_) {
        view_h_[a.cfg.id] = 0.0;
        point_agent(a, 0.0);
    }
}

World::AgentRuntime& World::agent_ref(int agent) {
    for (AgentRuntime& a : agents_) {
        if (a.cfg.id == agent) return a;
    }
    throw UnknownAgentError("world: unknown agent id " + std::to_string(agent));
}

const World::AgentRuntime& World::agent_ref(int agent) const {
    for (const AgentRuntime& a : agents_) {
        if (a.cfg.id == agent) return a;
    }
    throw UnknownAgentError("world: unknown agent id " + std::to_string(agent));
}

const std::set<int>& World::fusion_visible(int agent) const {
    return agent_ref(agent).fusion_visible;
}

int World::fusion_target_poi(int agent) const { return agent_ref(agent).fusion_target; }

const Eigen::Vector3d& World::fusion_position(int agent) const {
    return agent_ref(agent).fusion_position;
}

const orbit::RelativeState& World::agent_state(int agent) const {
    return agent_ref(agent).state;
}

const sense::Pose& World::agent_pose(int agent) const { return agent_ref(agent).pose; }

std::map<int, Eigen::Vector3d> World::positions() const {
    std::map<int, Eigen::Vector3d> out;
    for (const AgentRuntime& a : agents_) {
        out[a.cfg.id] = a.pose.position;
    }
    return out;
}

void World::point_agent(AgentRuntime& agent, double t) {
    // Aim at the reachable POI with the highest variance under the
    // assignment-phase model (the prior field); ties go to the lowest id.
    // Keying the target off the live consensus would let one agent's fault
    // reshuffle every other agent's pointing. With no reachable POI the
    // previous boresight is kept.
    int best = -1;
    double best_variance = -std::numeric_limits<double>::infinity();
    for (const sense::PoiModel& poi : config_.pois) {
        if (!reachable(agent.pose.position, agent.cfg.camera, poi, config_.target)) {
            continue;
        }
        if (poi.prior_variance > best_variance) {
            best_variance = poi.prior_variance;
            best = poi.id;
        }
    }
    if (best >= 0) {
        agent.pose = sense::point_at(agent.pose.position, config_.find_poi(best)->position);
    }
    agent.current_target_poi = best;

    for (FaultChannel& channel : agent.pointing_faults) {
        agent.pose = fault::apply_pointing_fault(channel.spec, t, agent.pose, channel.rng);
    }
}

void World::step(double dt) {
    const double t = time_;
    for (AgentRuntime& a : agents_) {
        orbit::RelativeState s = a.state;
        for (FaultChannel& channel : a.state_faults) {
            s = fault::apply_state_fault(channel.spec, t, s, channel.rng);
        }
        a.state = orbit::propagate(s, orbit::ControlInput::zero(), config_.environment, dt);
        a.pose.position = a.state.position;
    }
    time_ += dt;
    ++step_index_;
    for (AgentRuntime& a : agents_) {
        point_agent(a, time_);
    }
}

double World::apply_sensor_faults(const AgentRuntime& agent, double t,
                                  double sigma_value) const {
    for (const fault::FaultSpec& spec : agent.sensor_faults) {
        sigma_value = fault::apply_sensor_variance_fault(spec, t, sigma_value);
    }
    return sigma_value;
}

cost::CostBreakdown World::fusion_step() {
    const double t = time_;
    const auto pos = positions();
    const CommGraph graph = build_comm_graph(t, pos, config_.comm_radius);
    const std::set<int> connected = monitor_connected(graph, pos, config_.comm_radius);

    cost::SigmaTable table;
    table.timestamp = t;
    for (AgentRuntime& a : agents_) {
        if (connected.count(a.cfg.id) == 0) continue;
        table.poses[a.cfg.id] = a.pose;
        for (const sense::PoiModel& poi : config_.pois) {
            double s = sense::sigma(a.pose, a.cfg.camera, poi, config_.target);
            s = apply_sensor_faults(a, t, s);
            table.set(a.cfg.id, poi.id, s);
        }
    }

    const std::vector<int> observers(connected.begin(), connected.end());
    cost::CostBreakdown breakdown = cost::decompose(config_.pois, table, observers);
    breakdown.timestamp = t;

    held_psi_ = breakdown.psi;
    last_prior_term_ = breakdown.prior_term;

    for (AgentRuntime& a : agents_) {
        if (connected.count(a.cfg.id) != 0) {
            view_h_[a.cfg.id] = breakdown.agent_terms.at(a.cfg.id);
            a.fusion_visible =
                sense::visible_set(a.pose, a.cfg.camera, config_.pois, config_.target);
            a.fusion_target = a.current_target_poi;
            a.fusion_position = a.pose.position;
        } else {
            // No update over the network: the monitor keeps the last value.
            breakdown.agent_terms[a.cfg.id] = view_h_.at(a.cfg.id);
        }
    }

    log_.fusions.push_back(breakdown);
    return breakdown;
}

double World::monitor_global_cost() const {
    double total = last_prior_term_;
    for (const auto& [agent, h] : view_h_) {
        total += h;
    }
    return total;
}

std::map<int, double> World::transmit(double t) {
    const auto pos = positions();
    const CommGraph graph = build_comm_graph(t, pos, config_.comm_radius);
    const std::set<int> connected = monitor_connected(graph, pos, config_.comm_radius);

    std::map<int, double> received = last_received_;
    for (AgentRuntime& a : agents_) {
        if (connected.count(a.cfg.id) == 0) {
            // Out of range: monitor holds the previous transmission.
            if (received.count(a.cfg.id) == 0) received[a.cfg.id] = view_h_.at(a.cfg.id);
            continue;
        }
        double h = view_h_.at(a.cfg.id);
        for (FaultChannel& channel : a.comm_faults) {
            h = fault::apply_comm_fault(channel.spec, t, h, channel.rng);
        }
        received[a.cfg.id] = h;
    }
    return received;
}

void World::fdi_baseline(const monitor::NominalPrediction& prediction) {
    const double t = time_;
    const std::map<int, double> received = transmit(t);

    double h_real = last_prior_term_;
    for (const AgentRuntime& a : agents_) {
        h_real += received.at(a.cfg.id);
        log_.transmissions.push_back({t, a.cfg.id, received.at(a.cfg.id),
                                      prediction.agent_cost.at(a.cfg.id).at(0)});
    }
    const double h_nom = prediction.global_cost.empty() ? h_real : prediction.global_cost[0];

    fdi_times_.push_back(t);
    h_real_series_.push_back(h_real);
    h_nom_series_.push_back(h_nom);
    log_.global.push_back({t, h_real, h_nom, 0.0, false});

    last_received_ = received;
    fdi_tick_ = 1;
}

monitor::FaultReport World::fdi_step(const monitor::NominalPrediction& prediction) {
    const double t = time_;
    const std::size_t m = fdi_tick_;
    const std::map<int, double> received = transmit(t);

    monitor::FaultReport report;
    report.t = t;
    double h_real = last_prior_term_;

    for (AgentRuntime& a : agents_) {
        const int id = a.cfg.id;
        const double h_now = received.at(id);
        // The expected cost is evaluated under the psi the monitor holds
        // right now: with the prediction's own psi a fault elsewhere in the
        // network would leak into this agent's residual through the shared
        // normalization.
        const double h_pred_now = monitor::restricted_agent_cost(
            id, prediction.visible_sets.at(id).at(m), prediction, config_, m, held_psi_);
        const double h_prev =
            config_.fdi.differencing == Differencing::Predicted
                ? monitor::restricted_agent_cost(id, prediction.visible_sets.at(id).at(m - 1),
                                                 prediction, config_, m - 1, held_psi_)
                : last_received_.at(id);
        h_real += h_now;
        log_.transmissions.push_back({t, id, h_now, h_pred_now});

        monitor::FaultMetricRecord rec = monitor::fault_metric(h_now, h_prev, h_pred_now);
        rec.agent = id;
        rec.t = t;

        monitor::ThresholdRecord threshold;
        threshold.agent = id;
        threshold.t = t;
        threshold.epsilon = config_.resolved_epsilon();
        try {
            fault::FaultRng rng(monitor::threshold_seed(config_.master_seed, id, m));
            const auto candidates =
                monitor::sample_candidate_sets(id, prediction, config_, m,
                                               threshold.epsilon, config_.fdi.n_samples, rng);
            threshold = monitor::compute_threshold(id, candidates, prediction, config_,
                                                   h_prev, h_pred_now, m, held_psi_);
            threshold.epsilon = config_.resolved_epsilon();
        } catch (const EmptyCandidateError&) {
            threshold.tau = config_.fdi.tau_floor;
            threshold.sample_count = config_.fdi.n_samples;
            threshold.fallback = true;
        } catch (const ThresholdUnavailableError&) {
            threshold.tau = config_.fdi.tau_floor;
            threshold.sample_count = config_.fdi.n_samples;
            threshold.fallback = true;
        }

        const bool flagged = monitor::detect(rec, threshold);
        log_.metrics.push_back(rec);
        log_.thresholds.push_back(threshold);
        report.agents.push_back({id, rec.classification, rec.metric, threshold.tau, flagged});
    }

    const double h_nom = prediction.global_cost.at(m);
    fdi_times_.push_back(t);
    h_real_series_.push_back(h_real);
    h_nom_series_.push_back(h_nom);
    const double integral =
        monitor::integral_deviation(fdi_times_, h_real_series_, h_nom_series_);
    report.global_integral_flag =
        monitor::integral_detector(fdi_times_, h_real_series_, h_nom_series_,
                                   config_.fdi.delta_threshold);

    log_.global.push_back(
        {t, h_real, h_nom, integral, report.global_integral_flag});
    log_.reports.push_back(report);

    last_received_ = received;
    fdi_tick_ = m + 1;
    return report;
}

void World::record_tick() {
    const double t = time_;
    for (const AgentRuntime& a : agents_) {
        int count = 0;
        double h = 0.0;
        for (const sense::PoiModel& poi : config_.pois) {
            double s = sense::sigma(a.pose, a.cfg.camera, poi, config_.target);
            s = apply_sensor_faults(a, t, s);
            if (std::isfinite(s)) {
                ++count;
                h += poi.importance * held_psi_.at(poi.id) * (1.0 / s);
            }
        }
        log_.states.push_back({t, a.cfg.id, a.state, a.pose, count, h});
    }
}

TelemetryLog run_scenario(const ScenarioConfig& config) {
    if (const auto issues = validate(config); !issues.empty()) {
        throw ValidationError(issues);
    }

    const monitor::NominalPrediction prediction = monitor::predict_nominal(config);

    World world(config, /*faults_enabled=*/true);
    const double dt = config.resolved_dt();
    const long steps = config.total_steps();
    const long fusion_stride = config.fusion_stride();
    const long fdi_stride = config.fdi_stride();

    try {
        for (long k = 0; k <= steps; ++k) {
            if (k % fusion_stride == 0) {
                world.fusion_step();
            }
            if (k % fdi_stride == 0) {
                if (k == 0) {
                    world.fdi_baseline(prediction);
                } else {
                    world.fdi_step(prediction);
                }
            }
            world.record_tick();
            if (k < steps) {
                world.step(dt);
            }
        }
    } catch (const Error& e) {
        world.log().aborted = true;
        world.log().abort_reason = e.what();
    }
    return std::move(world.log());
}

}  // namespace ifdi::sim

namespace ifdi::monitor {

NominalPrediction predict_nominal(const sim::ScenarioConfig& config) {
    if (const auto issues = sim::validate(config); !issues.empty()) {
        throw ValidationError(issues);
    }

    sim::World world(config, /*faults_enabled=*/false);
    const double dt = config.resolved_dt();
    const long steps = config.total_steps();
    const long fusion_stride = config.fusion_stride();
    const long fdi_stride = config.fdi_stride();

    NominalPrediction pred;
    pred.horizon_start = 0.0;
    pred.horizon_end = static_cast<double>(steps) * dt;
    pred.fdi_period = 1.0 / config.schedule.omega_fdi;
    for (const sim::AgentConfig& a : config.agents) {
        pred.agent_cost[a.id] = {};
        pred.visible_sets[a.id] = {};
        pred.target_poi[a.id] = {};
        pred.positions[a.id] = {};
    }

    for (long k = 0; k <= steps; ++k) {
        if (k % fusion_stride == 0) {
            world.fusion_step();
        }
        if (k % fdi_stride == 0) {
            pred.times.push_back(world.time());
            pred.global_cost.push_back(world.monitor_global_cost());
            pred.psi.push_back(world.held_psi());
            for (const sim::AgentConfig& a : config.agents) {
                pred.agent_cost[a.id].push_back(world.monitor_view_costs().at(a.id));
                pred.visible_sets[a.id].push_back(world.fusion_visible(a.id));
                pred.target_poi[a.id].push_back(world.fusion_target_poi(a.id));
                pred.positions[a.id].push_back(world.fusion_position(a.id));
            }
        }
        if (k < steps) {
            world.step(dt);
        }
    }
    return pred;
}

}  // namespace ifdi::monitor
