/**
 * @file monitor.hpp
 * @brief Centralized fault detection and identification: nominal prediction,
 *        the fault metric, performance classification, adaptive thresholds
 *        from neighborhood sampling, and detection.
 */

#ifndef IFDI_MONITOR_HPP
#define IFDI_MONITOR_HPP

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ifdi/rng.hpp"
#include "ifdi/scenario.hpp"

namespace ifdi::monitor {

/**
 * @brief Fault-free reference series recorded at FDI ticks.
 *
 * Produced by running the full pipeline with the fault list ignored. Each
 * per-agent entry is a consistent snapshot taken at the fusion preceding the
 * tick: predicted cost, expected visible set, target POI, sensor position,
 * and the psi table in effect.
 */
struct NominalPrediction {
    double horizon_start = 0.0;  // [s]
    double horizon_end = 0.0;    // [s]
    double fdi_period = 0.0;     // [s] between ticks

    std::vector<double> times;                              // tick m -> t
    std::vector<double> global_cost;                        // H_nom(m)
    std::vector<std::map<int, double>> psi;                 // m -> poi -> psi
    std::map<int, std::vector<double>> agent_cost;          // id -> H_i^pred(m)
    std::map<int, std::vector<std::set<int>>> visible_sets; // id -> S_i^pred(m)
    std::map<int, std::vector<int>> target_poi;             // id -> aim poi (-1 none)
    std::map<int, std::vector<Eigen::Vector3d>> positions;  // id -> sensor position

    std::size_t tick_count() const { return times.size(); }
};

enum class Classification { Nominal, Improved, Deteriorating, Indeterminate };

const char* classification_name(Classification c);

/// One FDI residual evaluation for one agent.
struct FaultMetricRecord {
    int agent = 0;
    double t = 0.0;
    double delta_h = 0.0;       // H_i(t) - H_i(t - window)
    double delta_h_pred = 0.0;  // H_i^pred(t) - H_i(t - window)
    double ratio_x = 0.0;       // delta_h / delta_h_pred (NaN when degenerate)
    double metric = 0.0;        // |1 - ratio_x|, 0 when degenerate
    Classification classification = Classification::Indeterminate;
};

/// Adaptive detection threshold for one agent at one tick.
struct ThresholdRecord {
    int agent = 0;
    double t = 0.0;
    double tau = 0.0;
    int sample_count = 0;
    double epsilon = 0.0;   // [m] neighborhood radius used
    bool fallback = false;  // true when tau_floor replaced an unavailable tau
};

/// Per-agent verdict plus the global integral test outcome at one tick.
struct AgentVerdict {
    int agent = 0;
    Classification classification = Classification::Indeterminate;
    double metric = 0.0;
    double tau = 0.0;
    bool flagged = false;
};

struct FaultReport {
    double t = 0.0;
    std::vector<AgentVerdict> agents;  // ascending agent id
    bool global_integral_flag = false;

    std::vector<int> flagged_agents() const;
};

/**
 * @brief Runs the pipeline fault-free over the config horizon and records
 *        the per-agent and global nominal series at FDI ticks.
 */
NominalPrediction predict_nominal(const sim::ScenarioConfig& config);

/**
 * @brief The FDI residual: metric = |1 - (h_now - h_prev)/(h_pred_now - h_prev)|.
 *
 * A denominator below 1e-12 * max(|h_pred_now|, |h_prev|, 1) makes the tick
 * indeterminate: ratio_x is NaN, metric 0, and detection is skipped.
 */
FaultMetricRecord fault_metric(double h_now, double h_prev, double h_pred_now);

/**
 * @brief Performance classification of a non-degenerate residual.
 *
 * Deteriorating when the measured and predicted increments disagree in sign,
 * or agree with x < 1; improved when they agree with x > 1; nominal when
 * x = 1 within 1e-9.
 */
Classification classify(double delta_h, double delta_h_pred, double ratio_x);

/**
 * @brief Samples candidate visible-POI sets by re-aiming the sensor at
 *        random points within the epsilon-neighborhood (on the target
 *        surface) of the agent's nominal target POI.
 *
 * Throws EmptyCandidateError when the agent has no nominal target at the
 * tick. epsilon = 0 reproduces the expected visible set exactly.
 */
std::vector<std::set<int>> sample_candidate_sets(int agent,
                                                 const NominalPrediction& prediction,
                                                 const sim::ScenarioConfig& config,
                                                 std::size_t tick, double epsilon,
                                                 int n_samples, fault::FaultRng& rng);

/**
 * @brief Evaluates tau over the candidate sets and returns the minimum.
 *
 * Candidate costs and the expected cost h_pred_now must be evaluated under
 * one consensus table (see restricted_agent_cost). Candidates identical to
 * the expected set (or with exactly zero cost deviation) are excluded by
 * the strict lower bound. Throws ThresholdUnavailableError when no
 * admissible candidate remains or the differencing denominator is
 * degenerate.
 */
ThresholdRecord compute_threshold(int agent, const std::vector<std::set<int>>& candidates,
                                  const NominalPrediction& prediction,
                                  const sim::ScenarioConfig& config, double h_prev,
                                  double h_pred_now, std::size_t tick,
                                  const std::map<int, double>& psi);

/**
 * @brief Cost of one POI set from the agent's nominal snapshot at the tick,
 *        normalized by the given consensus table psi.
 *
 * The monitor evaluates the expected cost under the psi it holds at
 * evaluation time, so that a fault on one agent cannot leak into another
 * agent's residual through the shared normalization. With the prediction's
 * own psi this reproduces the recorded nominal cost exactly.
 */
double restricted_agent_cost(int agent, const std::set<int>& poi_set,
                             const NominalPrediction& prediction,
                             const sim::ScenarioConfig& config, std::size_t tick,
                             const std::map<int, double>& psi);

/// Fault is declared when the metric strictly exceeds the threshold.
/// Indeterminate records are never flagged.
bool detect(const FaultMetricRecord& record, const ThresholdRecord& threshold);

/// Trapezoidal integral of (h - h_nom) over the sampled times.
double integral_deviation(std::span<const double> times, std::span<const double> h,
                          std::span<const double> h_nom);

/// Global behavior fault test: integral of (h - h_nom) >= delta_threshold * t,
/// evaluated at t = times.back().
bool integral_detector(std::span<const double> times, std::span<const double> h,
                       std::span<const double> h_nom, double delta_threshold);

/// Stable per-(agent, tick) seed for threshold sampling streams.
std::uint64_t threshold_seed(std::uint64_t master_seed, int agent, std::size_t tick);

}  // namespace ifdi::monitor

#endif
