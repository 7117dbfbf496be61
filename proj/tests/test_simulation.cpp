#include <doctest.h>

#include <cmath>
#include <map>

#include "ifdi/simulation.hpp"
#include "scenario_fixtures.hpp"

using namespace ifdi;

namespace {

bool states_equal(const sim::AgentStateRecord& a, const sim::AgentStateRecord& b) {
    return a.t == b.t && a.agent == b.agent && a.state.position == b.state.position &&
           a.state.velocity == b.state.velocity && a.pose.boresight == b.pose.boresight &&
           a.visible_count == b.visible_count && a.h_i == b.h_i;
}

}  // namespace

TEST_CASE("comm graph is symmetric with the radius definition") {
    std::map<int, Eigen::Vector3d> pos{{0, {0, 80, 0}},
                                       {1, {0, 170, 0}},
                                       {2, {0, 400, 0}}};
    const auto graph = sim::build_comm_graph(12.0, pos, 100.0);
    CHECK(graph.t == 12.0);
    CHECK(graph.edge(0, 1));  // 90 m apart
    CHECK(graph.edge(1, 0));
    CHECK_FALSE(graph.edge(1, 2));  // 230 m apart
    CHECK_FALSE(graph.edge(0, 2));
    CHECK_FALSE(graph.edge(0, 0));  // no self edges

    for (std::size_t i = 0; i < graph.ids.size(); ++i) {
        for (std::size_t j = 0; j < graph.ids.size(); ++j) {
            CHECK(graph.adjacency[i][j] == graph.adjacency[j][i]);
            const double d = (pos.at(graph.ids[i]) - pos.at(graph.ids[j])).norm();
            if (i != j) CHECK(graph.adjacency[i][j] == (d <= 100.0));
        }
    }
}

TEST_CASE("monitor connectivity relays through in-range neighbors") {
    std::map<int, Eigen::Vector3d> pos{{0, {0, 80, 0}},
                                       {1, {0, 170, 0}},
                                       {2, {0, 400, 0}}};
    const auto graph = sim::build_comm_graph(0.0, pos, 100.0);
    const auto connected = sim::monitor_connected(graph, pos, 100.0);
    CHECK(connected == std::set<int>{0, 1});  // 1 relays via 0; 2 unreachable

    const auto all = sim::monitor_connected(graph, pos, 1.0e9);
    CHECK(all == std::set<int>{0, 1, 2});
}

TEST_CASE("fault-free step tracks the closed-form PRO") {
    auto cfg = fixtures::short_scenario(0.05);
    cfg.faults.clear();
    sim::World world(cfg, true);
    const double dt = cfg.resolved_dt();

    for (int k = 1; k <= 100; ++k) {
        world.step(dt);
        for (const auto& agent : cfg.agents) {
            const auto exact =
                orbit::pro_state(agent.orbit, cfg.environment, world.time());
            CHECK((world.agent_state(agent.id).position - exact.position).norm() <= 1e-5);
        }
    }
}

TEST_CASE("a world with zero agents still advances time") {
    auto cfg = fixtures::short_scenario(0.05);
    cfg.agents.clear();
    cfg.faults.clear();
    sim::World world(cfg, true);
    world.step(3.0);
    world.step(3.0);
    CHECK(world.time() == 6.0);
    CHECK(world.step_index() == 2);
    const auto bd = world.fusion_step();
    CHECK(bd.agent_terms.empty());
    CHECK(bd.total_h == doctest::Approx(bd.prior_term).epsilon(1e-12));
}

TEST_CASE("fusion with an unreachable target leaves only the prior") {
    auto cfg = fixtures::short_scenario(0.05);
    cfg.faults.clear();
    for (auto& agent : cfg.agents) {
        agent.camera.max_range = 1.0;  // nothing is visible
    }
    sim::World world(cfg, true);
    const auto bd = world.fusion_step();
    double prior = 0.0;
    for (const auto& poi : cfg.pois) prior += poi.importance * poi.prior_variance;
    CHECK(bd.total_h == doctest::Approx(prior).epsilon(1e-12));
    for (const auto& [agent, h] : bd.agent_terms) {
        CHECK(h == 0.0);
    }
}

TEST_CASE("fusion with unlimited comm equals a direct decompose of the table") {
    auto cfg = fixtures::short_scenario(0.05);
    cfg.faults.clear();
    sim::World world(cfg, true);
    world.step(cfg.resolved_dt());
    const auto bd = world.fusion_step();

    cost::SigmaTable table;
    table.timestamp = world.time();
    std::vector<int> observers;
    for (const auto& agent : cfg.agents) {
        observers.push_back(agent.id);
        table.poses[agent.id] = world.agent_pose(agent.id);
        for (const auto& poi : cfg.pois) {
            table.set(agent.id, poi.id,
                      sense::sigma(world.agent_pose(agent.id), agent.camera, poi,
                                   cfg.target));
        }
    }
    const auto expected = cost::decompose(cfg.pois, table, observers);
    CHECK(bd.total_h == expected.total_h);
    CHECK(bd.prior_term == expected.prior_term);
    for (int id : observers) {
        CHECK(bd.agent_terms.at(id) == expected.agent_terms.at(id));
    }
}

TEST_CASE("a disconnected agent's H_i is held at its last reported value") {
    auto cfg = fixtures::short_scenario(0.3);
    cfg.faults.clear();
    cfg.agents = {fixtures::make_agent(0, 45.0, 0.0, 5.0, 0.0, 0.0),
                  fixtures::make_agent(1, 40.0, 200.0, 0.0, M_PI, 0.0)};
    cfg.comm_radius = 150.0;  // agent 1 starts in range and drifts out

    sim::World world(cfg, true);
    const double dt = cfg.resolved_dt();
    const long stride = cfg.fusion_stride();

    double previous_h1 = 0.0;
    bool saw_disconnected = false;
    bool saw_connected = false;
    for (long k = 0; k <= cfg.total_steps(); ++k) {
        if (k % stride == 0) {
            const auto bd = world.fusion_step();
            const Eigen::Vector3d p0 = world.agent_pose(0).position;
            const Eigen::Vector3d p1 = world.agent_pose(1).position;
            const bool direct = p1.norm() <= cfg.comm_radius;
            const bool relayed = (p1 - p0).norm() <= cfg.comm_radius &&
                                 p0.norm() <= cfg.comm_radius;
            if (!direct && !relayed) {
                saw_disconnected = true;
                CHECK(bd.agent_terms.at(1) == previous_h1);
            } else {
                saw_connected = true;
            }
            previous_h1 = bd.agent_terms.at(1);
        }
        if (k < cfg.total_steps()) world.step(dt);
    }
    CHECK(saw_disconnected);
    CHECK(saw_connected);
}

TEST_CASE("fusion and FDI records appear exactly at their cadence") {
    auto cfg = fixtures::short_scenario(0.25);
    cfg.faults.clear();
    const auto log = sim::run_scenario(cfg);
    REQUIRE_FALSE(log.aborted);

    const long steps = cfg.total_steps();
    const long expected_fusions = steps / cfg.fusion_stride() + 1;
    const long expected_fdi = steps / cfg.fdi_stride();  // evaluations from m=1
    CHECK(log.fusions.size() == static_cast<std::size_t>(expected_fusions));
    CHECK(log.reports.size() == static_cast<std::size_t>(expected_fdi));
    CHECK(log.metrics.size() ==
          static_cast<std::size_t>(expected_fdi) * cfg.agents.size());
    CHECK(log.global.size() == static_cast<std::size_t>(expected_fdi) + 1);

    const double fusion_period = 1.0 / cfg.schedule.omega_g;
    for (std::size_t k = 0; k < log.fusions.size(); ++k) {
        CHECK(log.fusions[k].timestamp ==
              doctest::Approx(k * fusion_period).epsilon(1e-12));
    }
    const double fdi_period = 1.0 / cfg.schedule.omega_fdi;
    for (std::size_t m = 0; m < log.reports.size(); ++m) {
        CHECK(log.reports[m].t == doctest::Approx((m + 1) * fdi_period).epsilon(1e-12));
    }
}

TEST_CASE("a 0.01-orbit horizon yields state records but no FDI evaluation") {
    auto cfg = fixtures::short_scenario(0.01);  // 20 steps < fdi stride of 50
    cfg.faults.clear();
    const auto log = sim::run_scenario(cfg);
    CHECK_FALSE(log.states.empty());
    CHECK(log.reports.empty());
    CHECK(log.metrics.empty());
}

TEST_CASE("repeated runs are bit-identical") {
    const auto cfg = fixtures::short_scenario(0.15);
    auto with_fault = cfg;
    fault::FaultSpec f;
    f.target_agent = 1;
    f.kind = fault::FaultKind::ActuatorState;
    f.onset_time = 100.0;
    f.magnitude = 0.01;
    with_fault.faults = {f};

    const auto log_a = sim::run_scenario(with_fault);
    const auto log_b = sim::run_scenario(with_fault);
    REQUIRE(log_a.states.size() == log_b.states.size());
    for (std::size_t k = 0; k < log_a.states.size(); ++k) {
        CHECK(states_equal(log_a.states[k], log_b.states[k]));
    }
    REQUIRE(log_a.metrics.size() == log_b.metrics.size());
    for (std::size_t k = 0; k < log_a.metrics.size(); ++k) {
        CHECK(log_a.metrics[k].metric == log_b.metrics[k].metric);
        CHECK(log_a.thresholds[k].tau == log_b.thresholds[k].tau);
    }
}

TEST_CASE("live fault-free series equals the nominal prediction bit-wise") {
    auto cfg = fixtures::short_scenario(0.2);
    cfg.faults.clear();
    const auto pred = monitor::predict_nominal(cfg);
    const auto log = sim::run_scenario(cfg);
    REQUIRE_FALSE(log.aborted);

    REQUIRE(log.global.size() == pred.times.size());
    for (std::size_t m = 0; m < log.global.size(); ++m) {
        CHECK(log.global[m].h_real == pred.global_cost[m]);
        CHECK(log.global[m].h_nom == pred.global_cost[m]);
    }
    for (const auto& tr : log.transmissions) {
        CHECK(tr.h_received == tr.h_pred);
    }
}

TEST_CASE("pre-fusion isolation: a fault on one agent leaves others untouched") {
    auto cfg = fixtures::short_scenario(0.05);
    cfg.faults.clear();

    auto faulted = cfg;
    fault::FaultSpec f;
    f.target_agent = 0;
    f.kind = fault::FaultKind::ActuatorState;
    f.onset_time = 2.0 * cfg.resolved_dt();  // strictly between fusion ticks
    f.magnitude = 0.05;
    faulted.faults = {f};

    const auto clean_log = sim::run_scenario(cfg);
    const auto fault_log = sim::run_scenario(faulted);

    const double first_refresh = cfg.fusion_stride() * cfg.resolved_dt();
    REQUIRE(clean_log.states.size() == fault_log.states.size());
    bool agent0_diverged = false;
    for (std::size_t k = 0; k < clean_log.states.size(); ++k) {
        const auto& a = clean_log.states[k];
        const auto& b = fault_log.states[k];
        if (a.t >= first_refresh) break;
        if (a.agent == 0) {
            if (!states_equal(a, b)) agent0_diverged = true;
        } else {
            CHECK(states_equal(a, b));
        }
    }
    CHECK(agent0_diverged);
}

TEST_CASE("a spurious-comm fault corrupts telemetry but not physics") {
    auto clean = fixtures::short_scenario(0.2);
    clean.faults.clear();

    auto corrupted = clean;
    fault::FaultSpec f;
    f.target_agent = 1;
    f.kind = fault::FaultKind::SpuriousComm;
    f.onset_time = 300.0;
    f.magnitude = 50.0;
    corrupted.faults = {f};

    const auto clean_log = sim::run_scenario(clean);
    const auto fault_log = sim::run_scenario(corrupted);

    // Physical states identical bit-wise for every agent.
    REQUIRE(clean_log.states.size() == fault_log.states.size());
    for (std::size_t k = 0; k < clean_log.states.size(); ++k) {
        CHECK(states_equal(clean_log.states[k], fault_log.states[k]));
    }

    // Only agent 1's residual reacts.
    bool agent1_nonzero = false;
    for (const auto& m : fault_log.metrics) {
        if (m.agent == 1 && m.t >= f.onset_time && m.metric > 0.0) {
            agent1_nonzero = true;
        }
        if (m.agent != 1) {
            CHECK(m.metric < 1e-9);
        }
    }
    CHECK(agent1_nonzero);
}

TEST_CASE("an inspection-sensor fault shifts only the faulty agent's residual") {
    auto cfg = fixtures::short_scenario(0.2);
    fault::FaultSpec f;
    f.target_agent = 3;
    f.kind = fault::FaultKind::InspectionSensor;
    f.onset_time = 300.0;
    f.magnitude = 6.0;  // variance inflation
    cfg.faults = {f};

    const auto log = sim::run_scenario(cfg);
    REQUIRE_FALSE(log.aborted);
    bool agent3_nonzero = false;
    for (const auto& m : log.metrics) {
        if (m.agent == 3 && m.t >= f.onset_time && m.metric > 1e-6) {
            agent3_nonzero = true;
        }
        if (m.agent != 3) {
            CHECK(m.metric < 1e-9);
        }
    }
    CHECK(agent3_nonzero);
}

TEST_CASE("predicted differencing preserves zero-fault nullity") {
    auto cfg = fixtures::short_scenario(0.2);
    cfg.faults.clear();
    cfg.fdi.differencing = sim::Differencing::Predicted;
    const auto log = sim::run_scenario(cfg);
    REQUIRE_FALSE(log.aborted);
    REQUIRE_FALSE(log.metrics.empty());
    for (const auto& m : log.metrics) {
        CHECK(m.metric < 1e-9);
    }
    for (const auto& report : log.reports) {
        CHECK(report.flagged_agents().empty());
    }
}

TEST_CASE("aborted propagation flushes a partial log") {
    auto cfg = fixtures::short_scenario(0.05);
    fault::FaultSpec f;
    f.target_agent = 0;
    f.kind = fault::FaultKind::ActuatorState;
    f.onset_time = 0.0;
    f.magnitude = 1.0e308;  // velocity noise overflows the integrator state
    cfg.faults = {f};

    const auto log = sim::run_scenario(cfg);
    CHECK(log.aborted);
    CHECK_FALSE(log.abort_reason.empty());
    CHECK_FALSE(log.states.empty());
}
