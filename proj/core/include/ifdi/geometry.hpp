/**
 * @file geometry.hpp
 * @brief Sensor pose, field-of-view visibility, and the per-POI variance
 *        function sigma.
 */

#ifndef IFDI_GEOMETRY_HPP
#define IFDI_GEOMETRY_HPP

#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ifdi/errors.hpp"

namespace ifdi::sense {

/// Sensor pose in the target frame. Attitude is reduced to the boresight
/// direction; the cost depends on pose only through visibility and distance.
struct Pose {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();    // [m]
    Eigen::Vector3d boresight = Eigen::Vector3d::UnitX();  // unit vector
};

/// Conical field-of-view camera. sigma_scale is the proportionality constant
/// of the variance law (any positive value rescales all costs uniformly).
struct CameraModel {
    double half_angle_fov = 0.5;  // [rad], in (0, pi/2)
    double max_range = 1.0e6;     // [m], > 0
    double sigma_scale = 1.0;     // > 0
};

/// Point of interest on the target surface.
struct PoiModel {
    int id = 0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();        // [m]
    Eigen::Vector3d surface_normal = Eigen::Vector3d::UnitX(); // unit vector
    double importance = 1.0;       // phi, >= 0
    double prior_variance = 1.0;   // w, > 0
};

/// Measurement of one POI by one observer. The FDI pipeline consumes only
/// variances; values are carried for completeness.
struct InspectionMeasurement {
    int observer_id = 0;
    int poi_id = 0;
    double value = 0.0;
    double noise_variance = 0.0;
};

/// Convex occluder centered at the origin: sphere or axis-aligned box.
class TargetBody {
public:
    enum class Shape { Sphere, Box };

    static TargetBody sphere(double radius);
    static TargetBody box(const Eigen::Vector3d& half_extents);

    Shape shape() const { return shape_; }
    double radius() const { return radius_; }
    const Eigen::Vector3d& half_extents() const { return half_extents_; }

    /// True if the open segment from a to b passes through the occluder
    /// interior. Endpoints on the surface do not block.
    bool blocks_segment(const Eigen::Vector3d& a, const Eigen::Vector3d& b) const;

    /// Nearest point on the occluder surface.
    Eigen::Vector3d project_to_surface(const Eigen::Vector3d& q) const;

    /// Signed distance to the surface (negative inside).
    double signed_surface_distance(const Eigen::Vector3d& q) const;

private:
    TargetBody() = default;

    Shape shape_ = Shape::Sphere;
    double radius_ = 1.0;
    Eigen::Vector3d half_extents_ = Eigen::Vector3d::Ones();
};

/**
 * @brief Full visibility predicate: the POI must be inside the FOV cone,
 *        within range, facing the sensor, and not occluded by the body.
 */
bool visible(const Pose& pose, const CameraModel& camera, const PoiModel& poi,
             const TargetBody& body);

/**
 * @brief Per-pixel variance of observing the POI from the pose.
 *
 * Returns sigma_scale * dist^2 when visible, +infinity otherwise. Inverses
 * of +infinity contribute exactly zero downstream.
 */
double sigma(const Pose& pose, const CameraModel& camera, const PoiModel& poi,
             const TargetBody& body);

/// Ids of all POIs visible from the pose. Order-independent by construction.
std::set<int> visible_set(const Pose& pose, const CameraModel& camera,
                          std::span<const PoiModel> pois, const TargetBody& body);

/// Pose at `position` with boresight toward `aim`.
/// Throws DegeneratePointingError when the points coincide.
Pose point_at(const Eigen::Vector3d& position, const Eigen::Vector3d& aim);

/// Builds a measurement record; the noise variance is always the sigma of
/// the generating geometry.
InspectionMeasurement make_measurement(int observer_id, const Pose& pose,
                                       const CameraModel& camera, const PoiModel& poi,
                                       const TargetBody& body, double value);

}  // namespace ifdi::sense

#endif
