/**
 * @file fault.hpp
 * @brief Fault taxonomy and injection operators.
 *
 * Four kinds are modeled: actuator-state faults perturb the velocity before
 * each propagation step, actuator-pointing faults rotate the sensor
 * boresight, inspection-sensor faults inflate the measurement variance, and
 * spurious-comm faults corrupt the cost value transmitted to the monitor
 * without touching the physical state.
 *
 * Every operator is the identity before onset and for magnitude zero.
 */

#ifndef IFDI_FAULT_HPP
#define IFDI_FAULT_HPP

#include <cstdint>
#include <string>

#include "ifdi/errors.hpp"
#include "ifdi/geometry.hpp"
#include "ifdi/orbit.hpp"
#include "ifdi/rng.hpp"

namespace ifdi::fault {

enum class FaultKind {
    ActuatorState,     // Gaussian velocity noise, magnitude in m/s per step
    ActuatorPointing,  // boresight rotation, magnitude in rad (std)
    InspectionSensor,  // multiplicative sigma inflation factor
    SpuriousComm,      // additive Gaussian noise on transmitted H_i
};

const char* fault_kind_name(FaultKind kind);
FaultKind fault_kind_from_name(const std::string& name);  // throws ParseError

struct FaultSpec {
    int target_agent = 0;
    FaultKind kind = FaultKind::ActuatorState;
    double onset_time = 0.0;   // [s], >= 0
    double magnitude = 0.0;    // >= 0, units per kind
    std::uint64_t rng_seed = 0;

    bool active(double t) const { return t >= onset_time && magnitude > 0.0; }
};

/// Stable per-fault seed from the scenario master seed, so editing the fault
/// list does not reshuffle other streams.
std::uint64_t derive_fault_seed(std::uint64_t master_seed, int agent, FaultKind kind);

/// Adds zero-mean Gaussian noise (std = magnitude) to the velocity.
/// Identity (bit-wise) when inactive.
orbit::RelativeState apply_state_fault(const FaultSpec& spec, double t,
                                       const orbit::RelativeState& state,
                                       FaultRng& rng);

/// Rotates the boresight by |N(0, magnitude)| about a uniformly random axis
/// orthogonal to it. The result stays unit-norm.
sense::Pose apply_pointing_fault(const FaultSpec& spec, double t,
                                 const sense::Pose& pose, FaultRng& rng);

/// Multiplies a finite sigma by the magnitude factor; +infinity stays
/// +infinity.
double apply_sensor_variance_fault(const FaultSpec& spec, double t,
                                   double sigma_value);

/// Adds zero-mean Gaussian noise (std = magnitude) to the transmitted H_i.
double apply_comm_fault(const FaultSpec& spec, double t, double reported_h,
                        FaultRng& rng);

}  // namespace ifdi::fault

#endif
