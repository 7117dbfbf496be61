/**
 * @file monitor.cpp
 * @brief Fault metric, classification, adaptive thresholds, detection.
 */

#include "ifdi/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ifdi::monitor {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int sign_of(double v) {
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool degenerate_denominator(double h_prev, double h_pred_now) {
    const double denom = h_pred_now - h_prev;
    const double scale = std::max({std::abs(h_pred_now), std::abs(h_prev), 1.0});
    return std::abs(denom) < 1.0e-12 * scale;
}

}  // namespace

const char* classification_name(Classification c) {
    switch (c) {
        case Classification::Nominal: return "nominal";
        case Classification::Improved: return "improved";
        case Classification::Deteriorating: return "deteriorating";
        case Classification::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

std::vector<int> FaultReport::flagged_agents() const {
    std::vector<int> out;
    for (const auto& v : agents) {
        if (v.flagged) out.push_back(v.agent);
    }
    return out;
}

FaultMetricRecord fault_metric(double h_now, double h_prev, double h_pred_now) {
    FaultMetricRecord rec;
    rec.delta_h = h_now - h_prev;
    rec.delta_h_pred = h_pred_now - h_prev;

    if (degenerate_denominator(h_prev, h_pred_now)) {
        rec.ratio_x = std::numeric_limits<double>::quiet_NaN();
        rec.metric = 0.0;
        rec.classification = Classification::Indeterminate;
        return rec;
    }

    rec.ratio_x = rec.delta_h / rec.delta_h_pred;
    rec.metric = std::abs(1.0 - rec.ratio_x);
    rec.classification = classify(rec.delta_h, rec.delta_h_pred, rec.ratio_x);
    return rec;
}

Classification classify(double delta_h, double delta_h_pred, double ratio_x) {
    if (std::abs(ratio_x - 1.0) <= 1.0e-9) {
        return Classification::Nominal;
    }
    if (sign_of(delta_h) != sign_of(delta_h_pred)) {
        return Classification::Deteriorating;
    }
    return ratio_x < 1.0 ? Classification::Deteriorating : Classification::Improved;
}

std::vector<std::set<int>> sample_candidate_sets(int agent,
                                                 const NominalPrediction& prediction,
                                                 const sim::ScenarioConfig& config,
                                                 std::size_t tick, double epsilon,
                                                 int n_samples, fault::FaultRng& rng) {
    const auto target_it = prediction.target_poi.find(agent);
    if (target_it == prediction.target_poi.end() || tick >= target_it->second.size() ||
        target_it->second[tick] < 0) {
        throw EmptyCandidateError("sample_candidate_sets: agent " + std::to_string(agent) +
                                  " has no nominal target POI at tick " +
                                  std::to_string(tick));
    }
    const int target_id = target_it->second[tick];
    const sense::PoiModel* target = config.find_poi(target_id);
    if (target == nullptr) {
        throw EmptyCandidateError("sample_candidate_sets: target POI " +
                                  std::to_string(target_id) + " not in scenario");
    }

    const Eigen::Vector3d position = prediction.positions.at(agent)[tick];
    const sense::CameraModel& camera = config.find_agent(agent)->camera;

    // Tangent basis at the target POI, from the axis least aligned with
    // its normal.
    const Eigen::Vector3d& normal = target->surface_normal;
    int smallest = 0;
    for (int k = 1; k < 3; ++k) {
        if (std::abs(normal[k]) < std::abs(normal[smallest])) smallest = k;
    }
    const Eigen::Vector3d e1 = normal.cross(Eigen::Vector3d::Unit(smallest)).normalized();
    const Eigen::Vector3d e2 = normal.cross(e1);

    std::vector<std::set<int>> candidates;
    candidates.reserve(static_cast<std::size_t>(n_samples));
    for (int k = 0; k < n_samples; ++k) {
        Eigen::Vector3d aim = target->position;
        if (epsilon > 0.0) {
            const double angle = kTwoPi * rng.uniform();
            const double radius = epsilon * std::sqrt(rng.uniform());
            const Eigen::Vector3d offset =
                radius * (std::cos(angle) * e1 + std::sin(angle) * e2);
            aim = config.target.project_to_surface(target->position + offset);
        }
        const sense::Pose pose = sense::point_at(position, aim);
        candidates.push_back(
            sense::visible_set(pose, camera, std::span(config.pois), config.target));
    }
    return candidates;
}

double restricted_agent_cost(int agent, const std::set<int>& poi_set,
                             const NominalPrediction& prediction,
                             const sim::ScenarioConfig& config, std::size_t tick,
                             const std::map<int, double>& psi) {
    const Eigen::Vector3d position = prediction.positions.at(agent)[tick];
    const double scale = config.find_agent(agent)->camera.sigma_scale;

    double term = 0.0;
    for (const sense::PoiModel& poi : config.pois) {
        if (poi_set.count(poi.id) == 0) continue;
        const double sigma_value = scale * (poi.position - position).squaredNorm();
        term += poi.importance * psi.at(poi.id) * (1.0 / sigma_value);
    }
    return term;
}

ThresholdRecord compute_threshold(int agent, const std::vector<std::set<int>>& candidates,
                                  const NominalPrediction& prediction,
                                  const sim::ScenarioConfig& config, double h_prev,
                                  double h_pred_now, std::size_t tick,
                                  const std::map<int, double>& psi) {
    if (degenerate_denominator(h_prev, h_pred_now)) {
        throw ThresholdUnavailableError("compute_threshold: degenerate differencing window");
    }
    const double denom = h_pred_now - h_prev;
    const std::set<int>& expected = prediction.visible_sets.at(agent)[tick];

    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const std::set<int>& candidate : candidates) {
        if (candidate == expected) continue;  // strict lower bound of the fault set
        const double h_candidate =
            restricted_agent_cost(agent, candidate, prediction, config, tick, psi);
        if (h_candidate == h_pred_now) continue;
        best = std::min(best, std::abs(1.0 - (h_candidate - h_prev) / denom));
        any = true;
    }
    if (!any) {
        throw ThresholdUnavailableError(
            "compute_threshold: all candidates identical to the expected set");
    }

    ThresholdRecord rec;
    rec.agent = agent;
    rec.t = prediction.times[tick];
    rec.tau = best;
    rec.sample_count = static_cast<int>(candidates.size());
    return rec;
}

bool detect(const FaultMetricRecord& record, const ThresholdRecord& threshold) {
    if (record.classification == Classification::Indeterminate) {
        return false;
    }
    return record.metric > threshold.tau;
}

double integral_deviation(std::span<const double> times, std::span<const double> h,
                          std::span<const double> h_nom) {
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double d0 = h[k] - h_nom[k];
        const double d1 = h[k + 1] - h_nom[k + 1];
        integral += 0.5 * (times[k + 1] - times[k]) * (d0 + d1);
    }
    return integral;
}

bool integral_detector(std::span<const double> times, std::span<const double> h,
                       std::span<const double> h_nom, double delta_threshold) {
    if (times.size() < 2) return false;
    const double t = times.back() - times.front();
    return integral_deviation(times, h, h_nom) >= delta_threshold * t;
}

std::uint64_t threshold_seed(std::uint64_t master_seed, int agent, std::size_t tick) {
    std::uint64_t h = fault::mix64(master_seed ^ 0x7468726573686Full);  // "thresho"
    h = fault::mix64(h ^ static_cast<std::uint64_t>(agent));
    h = fault::mix64(h ^ static_cast<std::uint64_t>(tick));
    return h;
}

}  // namespace ifdi::monitor
