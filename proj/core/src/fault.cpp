/**
 * @file fault.cpp
 * @brief Fault operators.
 */

#include "ifdi/fault.hpp"

#include <cmath>

namespace ifdi::fault {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_kind(const FaultSpec& spec, FaultKind expected, const char* op) {
    if (spec.kind != expected) {
        throw WrongFaultKindError(std::string(op) + ": fault spec has kind " +
                                  fault_kind_name(spec.kind));
    }
}

}  // namespace

double FaultRng::gaussian() {
    double u1 = uniform();
    const double u2 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

const char* fault_kind_name(FaultKind kind) {
    switch (kind) {
        case FaultKind::ActuatorState: return "actuator-state";
        case FaultKind::ActuatorPointing: return "actuator-pointing";
        case FaultKind::InspectionSensor: return "inspection-sensor";
        case FaultKind::SpuriousComm: return "spurious-comm";
    }
    return "unknown";
}

FaultKind fault_kind_from_name(const std::string& name) {
    if (name == "actuator-state") return FaultKind::ActuatorState;
    if (name == "actuator-pointing") return FaultKind::ActuatorPointing;
    if (name == "inspection-sensor") return FaultKind::InspectionSensor;
    if (name == "spurious-comm") return FaultKind::SpuriousComm;
    throw ParseError("unknown fault kind: \"" + name + "\"");
}

std::uint64_t derive_fault_seed(std::uint64_t master_seed, int agent, FaultKind kind) {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ (0x6167656E74ull + static_cast<std::uint64_t>(agent)));  // "agent"
    h = mix64(h ^ (0x6B696E64ull + static_cast<std::uint64_t>(kind)));     // "kind"
    return h;
}

orbit::RelativeState apply_state_fault(const FaultSpec& spec, double t,
                                       const orbit::RelativeState& state,
                                       FaultRng& rng) {
    require_kind(spec, FaultKind::ActuatorState, "apply_state_fault");
    if (!spec.active(t)) {
        return state;
    }
    orbit::RelativeState out = state;
    out.velocity.x() += spec.magnitude * rng.gaussian();
    out.velocity.y() += spec.magnitude * rng.gaussian();
    out.velocity.z() += spec.magnitude * rng.gaussian();
    return out;
}

sense::Pose apply_pointing_fault(const FaultSpec& spec, double t,
                                 const sense::Pose& pose, FaultRng& rng) {
    require_kind(spec, FaultKind::ActuatorPointing, "apply_pointing_fault");
    if (!spec.active(t)) {
        return pose;
    }

    // Basis of the plane orthogonal to the boresight, built from the axis
    // least aligned with it.
    const Eigen::Vector3d& b = pose.boresight;
    int smallest = 0;
    for (int k = 1; k < 3; ++k) {
        if (std::abs(b[k]) < std::abs(b[smallest])) smallest = k;
    }
    const Eigen::Vector3d e1 = b.cross(Eigen::Vector3d::Unit(smallest)).normalized();
    const Eigen::Vector3d e2 = b.cross(e1);

    const double angle = std::abs(spec.magnitude * rng.gaussian());
    const double axis_angle = kTwoPi * rng.uniform();
    const Eigen::Vector3d axis = std::cos(axis_angle) * e1 + std::sin(axis_angle) * e2;

    sense::Pose out = pose;
    out.boresight = (Eigen::AngleAxisd(angle, axis) * b).normalized();
    return out;
}

double apply_sensor_variance_fault(const FaultSpec& spec, double t,
                                   double sigma_value) {
    require_kind(spec, FaultKind::InspectionSensor, "apply_sensor_variance_fault");
    if (!spec.active(t) || !std::isfinite(sigma_value)) {
        return sigma_value;
    }
    return sigma_value * spec.magnitude;
}

double apply_comm_fault(const FaultSpec& spec, double t, double reported_h,
                        FaultRng& rng) {
    require_kind(spec, FaultKind::SpuriousComm, "apply_comm_fault");
    if (!spec.active(t)) {
        return reported_h;
    }
    return reported_h + spec.magnitude * rng.gaussian();
}

}  // namespace ifdi::fault
