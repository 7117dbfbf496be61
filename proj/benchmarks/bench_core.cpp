/**
 * @file bench_core.cpp
 * @brief Microbenchmarks for the hot paths: propagation, visibility,
 *        cost decomposition, and a short end-to-end scenario.
 */

#include <benchmark/benchmark.h>

#include "ifdi/simulation.hpp"

using namespace ifdi;

namespace {

std::vector<sense::PoiModel> bench_pois(int count, double radius) {
    std::vector<sense::PoiModel> pois;
    const double golden_angle = 3.14159265358979 * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / count;
        const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double angle = golden_angle * k;
        const Eigen::Vector3d unit(ring * std::cos(angle), ring * std::sin(angle), z);
        sense::PoiModel poi;
        poi.id = k;
        poi.position = radius * unit;
        poi.surface_normal = unit;
        poi.importance = 1.0;
        poi.prior_variance = 5000.0;
        pois.push_back(poi);
    }
    return pois;
}

sim::ScenarioConfig bench_scenario() {
    sim::ScenarioConfig cfg;
    cfg.environment = orbit::OrbitEnvironment::from_period(6000.0);
    cfg.target = sense::TargetBody::sphere(5.0);
    cfg.pois = bench_pois(150, 5.0);
    for (int id = 0; id < 4; ++id) {
        sim::AgentConfig a;
        a.id = id;
        a.orbit.radial_amplitude = 45.0 + 5.0 * id;
        a.orbit.cross_track_amplitude = 6.0 + id;
        a.orbit.phase_radial = 1.57 * id;
        a.camera.half_angle_fov = 0.06;
        a.camera.max_range = 400.0;
        cfg.agents.push_back(a);
    }
    cfg.schedule.omega_g = 1.0 / 30.0;
    cfg.schedule.omega_fdi = 1.0 / 150.0;
    cfg.sim_dt = 3.0;
    cfg.horizon_orbits = 0.05;
    cfg.fdi.epsilon = 1.0;
    return cfg;
}

}  // namespace

static void BM_Rk4Step(benchmark::State& state) {
    const auto env = orbit::OrbitEnvironment::from_period(6000.0);
    orbit::RelativeState s = orbit::pro_state({50.0, 0.0, 10.0, 0.0, 0.0}, env, 0.0);
    for (auto _ : state) {
        s = orbit::propagate(s, orbit::ControlInput::zero(), env, 3.0);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Rk4Step);

static void BM_VisibleSet(benchmark::State& state) {
    const auto pois = bench_pois(static_cast<int>(state.range(0)), 5.0);
    const auto body = sense::TargetBody::sphere(5.0);
    const sense::CameraModel camera{0.06, 400.0};
    const auto pose = sense::point_at(Eigen::Vector3d(60.0, 20.0, 5.0), pois[0].position);
    for (auto _ : state) {
        auto set = sense::visible_set(pose, camera, pois, body);
        benchmark::DoNotOptimize(set);
    }
}
BENCHMARK(BM_VisibleSet)->Arg(50)->Arg(150);

static void BM_Decompose(benchmark::State& state) {
    const auto pois = bench_pois(static_cast<int>(state.range(0)), 5.0);
    const auto body = sense::TargetBody::sphere(5.0);
    const sense::CameraModel camera{0.25, 400.0};
    cost::SigmaTable table;
    std::vector<int> observers;
    for (int id = 0; id < 5; ++id) {
        observers.push_back(id);
        const Eigen::Vector3d pos(60.0 + id, 10.0 * id - 20.0, 4.0 * id);
        const auto pose = sense::point_at(pos, pois[10 * id].position);
        table.poses[id] = pose;
        for (const auto& poi : pois) {
            table.set(id, poi.id, sense::sigma(pose, camera, poi, body));
        }
    }
    for (auto _ : state) {
        auto bd = cost::decompose(pois, table, observers);
        benchmark::DoNotOptimize(bd);
    }
}
BENCHMARK(BM_Decompose)->Arg(50)->Arg(200);

static void BM_ShortScenario(benchmark::State& state) {
    const auto cfg = bench_scenario();
    for (auto _ : state) {
        auto log = sim::run_scenario(cfg);
        benchmark::DoNotOptimize(log);
    }
}
BENCHMARK(BM_ShortScenario)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
