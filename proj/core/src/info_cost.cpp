/**
 * @file info_cost.cpp
 * @brief Information cost and its per-agent decomposition.
 */

#include "ifdi/info_cost.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ifdi::cost {

namespace {

/// w^-1 + sum sigma^-1 with infinite sigmas contributing exactly zero.
double information_sum(const sense::PoiModel& poi, std::span<const double> sigmas) {
    double sum = 1.0 / poi.prior_variance;
    for (double s : sigmas) {
        sum += 1.0 / s;  // 1/inf == 0 exactly
    }
    return sum;
}

}  // namespace

void SigmaTable::set(int observer, int poi, double sigma_value) {
    if (std::isfinite(sigma_value)) {
        entries[{observer, poi}] = sigma_value;
    }
}

double SigmaTable::sigma_or_inf(int observer, int poi) const {
    const auto it = entries.find({observer, poi});
    if (it == entries.end()) {
        return std::numeric_limits<double>::infinity();
    }
    return it->second;
}

std::vector<double> SigmaTable::sigmas_for_poi(int poi) const {
    std::vector<double> out;
    out.reserve(poses.size());
    for (const auto& [observer, pose] : poses) {
        const auto it = entries.find({observer, poi});
        if (it != entries.end()) {
            out.push_back(it->second);
        }
    }
    return out;
}

std::vector<int> SigmaTable::observers() const {
    std::vector<int> out;
    out.reserve(poses.size());
    for (const auto& [observer, pose] : poses) {
        out.push_back(observer);
    }
    return out;
}

bool SigmaTable::has_observer(int observer) const {
    return poses.count(observer) != 0;
}

double h_poi(const sense::PoiModel& poi, std::span<const double> sigmas) {
    return 1.0 / information_sum(poi, sigmas);
}

double psi(const sense::PoiModel& poi, std::span<const double> sigmas) {
    const double h = h_poi(poi, sigmas);
    return h * h;
}

double total_cost(std::span<const sense::PoiModel> pois, const SigmaTable& table) {
    double total = 0.0;
    for (const sense::PoiModel& poi : pois) {
        total += h_poi(poi, table.sigmas_for_poi(poi.id)) * poi.importance;
    }
    return total;
}

CostBreakdown decompose(std::span<const sense::PoiModel> pois, const SigmaTable& table,
                        std::span<const int> observers) {
    CostBreakdown out;
    out.timestamp = table.timestamp;
    for (int observer : observers) {
        out.agent_terms[observer] = 0.0;
    }

    for (const sense::PoiModel& poi : pois) {
        const std::vector<double> sigmas = table.sigmas_for_poi(poi.id);
        const double h = h_poi(poi, sigmas);
        const double psi_s = h * h;
        out.psi[poi.id] = psi_s;
        out.total_h += h * poi.importance;
        out.prior_term += poi.importance * psi_s * (1.0 / poi.prior_variance);
    }

    // Per-agent sums in (observer, poi) order; S_i is the finite-sigma set.
    for (auto& [observer, term] : out.agent_terms) {
        for (const sense::PoiModel& poi : pois) {
            const auto it = table.entries.find({observer, poi.id});
            if (it == table.entries.end()) continue;
            term += poi.importance * out.psi.at(poi.id) * (1.0 / it->second);
        }
    }
    return out;
}

double agent_cost(int observer_id, std::span<const sense::PoiModel> pois,
                  const SigmaTable& table) {
    if (!table.has_observer(observer_id)) {
        throw UnknownAgentError("agent_cost: unknown observer id " +
                                std::to_string(observer_id));
    }

    // Same psi as decompose: fused over the whole table.
    double term = 0.0;
    for (const sense::PoiModel& poi : pois) {
        const auto it = table.entries.find({observer_id, poi.id});
        if (it == table.entries.end()) continue;
        const double h = h_poi(poi, table.sigmas_for_poi(poi.id));
        term += poi.importance * (h * h) * (1.0 / it->second);
    }
    return term;
}

}  // namespace ifdi::cost
