/**
 * @file orbit.cpp
 * @brief CW dynamics, RK4 propagation, and closed-form PROs.
 */

#include "ifdi/orbit.hpp"

#include <cmath>

namespace ifdi::orbit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

OrbitEnvironment OrbitEnvironment::from_mean_motion(double n) {
    return OrbitEnvironment{n, kTwoPi / n};
}

OrbitEnvironment OrbitEnvironment::from_period(double period) {
    return OrbitEnvironment{kTwoPi / period, period};
}

bool RelativeState::finite() const {
    return position.allFinite() && velocity.allFinite();
}

StateDerivative cw_derivative(const RelativeState& state, const ControlInput& u,
                              const OrbitEnvironment& env) {
    const double n = env.mean_motion_n;
    const Eigen::Vector3d& p = state.position;
    const Eigen::Vector3d& v = state.velocity;

    StateDerivative d;
    d.velocity = v;
    d.acceleration.x() = 3.0 * n * n * p.x() + 2.0 * n * v.y() + u.acceleration.x();
    d.acceleration.y() = -2.0 * n * v.x() + u.acceleration.y();
    d.acceleration.z() = -n * n * p.z() + u.acceleration.z();
    return d;
}

RelativeState propagate(const RelativeState& state, const ControlInput& u,
                        const OrbitEnvironment& env, double dt) {
    auto eval = [&](const RelativeState& s) { return cw_derivative(s, u, env); };
    auto advance = [](const RelativeState& s, const StateDerivative& d, double h) {
        RelativeState out;
        out.position = s.position + h * d.velocity;
        out.velocity = s.velocity + h * d.acceleration;
        return out;
    };

    const StateDerivative k1 = eval(state);
    const StateDerivative k2 = eval(advance(state, k1, 0.5 * dt));
    const StateDerivative k3 = eval(advance(state, k2, 0.5 * dt));
    const StateDerivative k4 = eval(advance(state, k3, dt));

    RelativeState out;
    out.position = state.position +
                   (dt / 6.0) * (k1.velocity + 2.0 * k2.velocity +
                                 2.0 * k3.velocity + k4.velocity);
    out.velocity = state.velocity +
                   (dt / 6.0) * (k1.acceleration + 2.0 * k2.acceleration +
                                 2.0 * k3.acceleration + k4.acceleration);

    if (!out.finite()) {
        throw PropagationDivergedError("propagation diverged: non-finite state after RK4 step");
    }
    return out;
}

RelativeState pro_state(const ProParameters& params, const OrbitEnvironment& env,
                        double t) {
    const double n = env.mean_motion_n;
    // fmod is exact, so reducing by the period keeps the closed form
    // bit-periodic and avoids phase precision loss at large t.
    const double tr = std::fmod(t, env.orbit_period);
    const double ar = params.radial_amplitude;
    const double ac = params.cross_track_amplitude;
    const double sr = std::sin(n * tr + params.phase_radial);
    const double cr = std::cos(n * tr + params.phase_radial);
    const double sc = std::sin(n * tr + params.phase_cross);
    const double cc = std::cos(n * tr + params.phase_cross);

    RelativeState s;
    s.position.x() = ar * sr;
    s.position.y() = params.along_track_offset + 2.0 * ar * cr;
    s.position.z() = ac * sc;
    s.velocity.x() = ar * n * cr;
    s.velocity.y() = -2.0 * ar * n * sr;
    s.velocity.z() = ac * n * cc;
    return s;
}

}  // namespace ifdi::orbit
