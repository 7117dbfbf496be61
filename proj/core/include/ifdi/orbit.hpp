/**
 * @file orbit.hpp
 * @brief Clohessy-Wiltshire relative motion and passive relative orbits.
 *
 * All states live in the target-centered LVLH frame: x radial, y along-track,
 * z cross-track. The target sits fixed at the origin.
 */

#ifndef IFDI_ORBIT_HPP
#define IFDI_ORBIT_HPP

#include <Eigen/Dense>

#include "ifdi/errors.hpp"

namespace ifdi::orbit {

/// Circular reference orbit of the target spacecraft.
struct OrbitEnvironment {
    double mean_motion_n = 0.0;  // [rad/s], > 0
    double orbit_period = 0.0;   // [s], = 2*pi / n

    static OrbitEnvironment from_mean_motion(double n);
    static OrbitEnvironment from_period(double period);
};

/// Translational state of an observer relative to the target.
struct RelativeState {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();  // [m]
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // [m/s]

    bool finite() const;
};

/// Time derivative of a RelativeState.
struct StateDerivative {
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();      // [m/s]
    Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();  // [m/s^2]
};

/// Commanded translational acceleration.
struct ControlInput {
    Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();  // [m/s^2]

    static ControlInput zero() { return ControlInput{}; }
};

/// Drift-free CW ellipse (2:1 in-plane ratio) plus cross-track oscillation.
/// Initial velocities are implied by the closed form, never stored.
struct ProParameters {
    double radial_amplitude = 0.0;      // [m], >= 0
    double along_track_offset = 0.0;    // [m]
    double cross_track_amplitude = 0.0; // [m], >= 0
    double phase_radial = 0.0;          // [rad]
    double phase_cross = 0.0;           // [rad]
};

/**
 * @brief Clohessy-Wiltshire right-hand side.
 *
 *   x'' =  3 n^2 x + 2 n y' + u_x
 *   y'' = -2 n x'          + u_y
 *   z'' = -n^2 z           + u_z
 */
StateDerivative cw_derivative(const RelativeState& state, const ControlInput& u,
                              const OrbitEnvironment& env);

/**
 * @brief Single classical RK4 step of the CW dynamics (control held constant).
 *
 * Deterministic for identical inputs. Throws PropagationDivergedError if the
 * result is non-finite.
 */
RelativeState propagate(const RelativeState& state, const ControlInput& u,
                        const OrbitEnvironment& env, double dt);

/**
 * @brief Closed-form state of a drift-free passive relative orbit at time t.
 *
 *   x =       A_r sin(n t + phi_r)
 *   y = y_0 + 2 A_r cos(n t + phi_r)
 *   z =       A_c sin(n t + phi_c)
 *
 * Velocities are the exact time derivatives; the orbit is periodic with
 * period 2*pi/n.
 */
RelativeState pro_state(const ProParameters& params, const OrbitEnvironment& env,
                        double t);

}  // namespace ifdi::orbit

#endif
