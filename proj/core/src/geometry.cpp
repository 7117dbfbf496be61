/**
 * @file geometry.cpp
 * @brief Visibility checking and the distance-squared variance law.
 */

#include "ifdi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ifdi::sense {

namespace {

// Occlusion slack matching the POI placement tolerance on the surface.
constexpr double kSurfaceEps = 1.0e-6;

}  // namespace

TargetBody TargetBody::sphere(double radius) {
    TargetBody b;
    b.shape_ = Shape::Sphere;
    b.radius_ = radius;
    return b;
}

TargetBody TargetBody::box(const Eigen::Vector3d& half_extents) {
    TargetBody b;
    b.shape_ = Shape::Box;
    b.half_extents_ = half_extents;
    return b;
}

bool TargetBody::blocks_segment(const Eigen::Vector3d& a,
                                const Eigen::Vector3d& b) const {
    if (shape_ == Shape::Sphere) {
        // Closest approach of the segment to the center; endpoints on the
        // surface must not count as blocking.
        const Eigen::Vector3d d = b - a;
        const double len2 = d.squaredNorm();
        double t = 0.0;
        if (len2 > 0.0) {
            t = std::clamp(-a.dot(d) / len2, 0.0, 1.0);
        }
        const double dist = (a + t * d).norm();
        return dist < radius_ - kSurfaceEps;
    }

    // Slab test of the segment against the box shrunk by the surface slack.
    const Eigen::Vector3d d = b - a;
    double t0 = 0.0;
    double t1 = 1.0;
    for (int k = 0; k < 3; ++k) {
        const double h = half_extents_[k] - kSurfaceEps;
        if (std::abs(d[k]) < 1.0e-300) {
            if (std::abs(a[k]) >= h) return false;
            continue;
        }
        double lo = (-h - a[k]) / d[k];
        double hi = (h - a[k]) / d[k];
        if (lo > hi) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
        if (t0 >= t1) return false;
    }
    return t1 > t0;
}

Eigen::Vector3d TargetBody::project_to_surface(const Eigen::Vector3d& q) const {
    if (shape_ == Shape::Sphere) {
        const double norm = q.norm();
        if (norm == 0.0) {
            return Eigen::Vector3d(radius_, 0.0, 0.0);
        }
        return q * (radius_ / norm);
    }

    const bool inside = std::abs(q.x()) < half_extents_.x() &&
                        std::abs(q.y()) < half_extents_.y() &&
                        std::abs(q.z()) < half_extents_.z();
    if (!inside) {
        return q.cwiseMax(-half_extents_).cwiseMin(half_extents_);
    }
    // Inside: push out through the nearest face.
    Eigen::Vector3d out = q;
    int axis = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        const double gap = half_extents_[k] - std::abs(q[k]);
        if (gap < best) {
            best = gap;
            axis = k;
        }
    }
    out[axis] = std::copysign(half_extents_[axis], q[axis] == 0.0 ? 1.0 : q[axis]);
    return out;
}

double TargetBody::signed_surface_distance(const Eigen::Vector3d& q) const {
    if (shape_ == Shape::Sphere) {
        return q.norm() - radius_;
    }
    const Eigen::Vector3d d = q.cwiseAbs() - half_extents_;
    const Eigen::Vector3d outside = d.cwiseMax(0.0);
    const double inside = std::min(0.0, d.maxCoeff());
    return outside.norm() + inside;
}

bool visible(const Pose& pose, const CameraModel& camera, const PoiModel& poi,
             const TargetBody& body) {
    const Eigen::Vector3d to_poi = poi.position - pose.position;
    const double dist2 = to_poi.squaredNorm();
    if (dist2 == 0.0) return false;
    if (dist2 > camera.max_range * camera.max_range) return false;

    // FOV cone: compare cosines instead of angles.
    const double dist = std::sqrt(dist2);
    if (pose.boresight.dot(to_poi) < std::cos(camera.half_angle_fov) * dist) {
        return false;
    }

    // POI must face the sensor.
    if (poi.surface_normal.dot(pose.position - poi.position) <= 0.0) {
        return false;
    }

    return !body.blocks_segment(pose.position, poi.position);
}

double sigma(const Pose& pose, const CameraModel& camera, const PoiModel& poi,
             const TargetBody& body) {
    if (!visible(pose, camera, poi, body)) {
        return std::numeric_limits<double>::infinity();
    }
    return camera.sigma_scale * (poi.position - pose.position).squaredNorm();
}

std::set<int> visible_set(const Pose& pose, const CameraModel& camera,
                          std::span<const PoiModel> pois, const TargetBody& body) {
    std::set<int> out;
    for (const PoiModel& poi : pois) {
        if (visible(pose, camera, poi, body)) {
            out.insert(poi.id);
        }
    }
    return out;
}

Pose point_at(const Eigen::Vector3d& position, const Eigen::Vector3d& aim) {
    const Eigen::Vector3d d = aim - position;
    const double norm = d.norm();
    if (norm == 0.0) {
        throw DegeneratePointingError("point_at: aim coincides with sensor position");
    }
    return Pose{position, d / norm};
}

InspectionMeasurement make_measurement(int observer_id, const Pose& pose,
                                       const CameraModel& camera, const PoiModel& poi,
                                       const TargetBody& body, double value) {
    return InspectionMeasurement{observer_id, poi.id, value,
                                 sigma(pose, camera, poi, body)};
}

}  // namespace ifdi::sense
