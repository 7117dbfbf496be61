/**
 * @file info_cost.hpp
 * @brief Global information cost H, its per-POI form, and the exact
 *        decomposition into per-agent contributions with the consensus
 *        normalization psi.
 */

#ifndef IFDI_INFO_COST_HPP
#define IFDI_INFO_COST_HPP

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ifdi/geometry.hpp"

namespace ifdi::cost {

/**
 * @brief Snapshot of per-(observer, POI) variances at one instant.
 *
 * Only finite entries are stored; a missing entry means the POI is not
 * visible (sigma = +infinity). Observers are identified by the pose
 * snapshot, so an observer that sees nothing is still known.
 */
struct SigmaTable {
    std::map<std::pair<int, int>, double> entries;  // (observer, poi) -> sigma
    std::map<int, sense::Pose> poses;               // observer -> pose snapshot
    double timestamp = 0.0;                          // [s]

    void set(int observer, int poi, double sigma_value);
    /// Stored sigma or +infinity when absent.
    double sigma_or_inf(int observer, int poi) const;
    /// Finite sigmas of one POI, in ascending observer order.
    std::vector<double> sigmas_for_poi(int poi) const;
    /// Observer ids in ascending order.
    std::vector<int> observers() const;
    bool has_observer(int observer) const;
};

/// The decomposition H = prior_term + sum_i H_i with the psi table that
/// produced it.
struct CostBreakdown {
    double total_h = 0.0;                 // H, summed directly over POIs
    double prior_term = 0.0;              // sum_s phi psi / w
    std::map<int, double> agent_terms;    // observer -> H_i
    std::map<int, double> psi;            // poi -> psi(s)
    double timestamp = 0.0;               // [s]
};

/// Cadences of inspection data fusion and fault diagnosis.
struct FusionSchedule {
    double omega_g = 1.0;    // [Hz], fusion / consensus update rate
    double omega_fdi = 1.0;  // [Hz], FDI evaluation rate, <= omega_g
};

/**
 * @brief Fused posterior variance of one POI:
 *        (w^-1 + sum_k sigma_k^-1)^-1, +infinity terms contributing 0.
 */
double h_poi(const sense::PoiModel& poi, std::span<const double> sigmas);

/// Consensus normalization psi = (w^-1 + sum_k sigma_k^-1)^-2 = h_poi^2.
double psi(const sense::PoiModel& poi, std::span<const double> sigmas);

/// Global cost H = sum_s h_poi(s) * phi(s).
double total_cost(std::span<const sense::PoiModel> pois, const SigmaTable& table);

/**
 * @brief Exact decomposition of H into the prior term and per-agent
 *        contributions H_i = sum_{s in S_i} phi psi sigma^-1.
 *
 * The identity total_h = prior_term + sum_i H_i holds up to floating-point
 * re-association. Observers absent from the table get H_i = 0.
 */
CostBreakdown decompose(std::span<const sense::PoiModel> pois, const SigmaTable& table,
                        std::span<const int> observers);

/// Single agent's contribution H_i; what the spacecraft shares with the
/// monitor. Throws UnknownAgentError if the observer is not in the table.
double agent_cost(int observer_id, std::span<const sense::PoiModel> pois,
                  const SigmaTable& table);

}  // namespace ifdi::cost

#endif
