#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ifdi/geometry.hpp"
#include "ifdi/rng.hpp"

using namespace ifdi;
using sense::CameraModel;
using sense::PoiModel;
using sense::Pose;
using sense::TargetBody;

namespace {

PoiModel sphere_poi(int id, const Eigen::Vector3d& unit, double radius,
                    double importance = 1.0, double prior = 25.0) {
    PoiModel poi;
    poi.id = id;
    poi.position = radius * unit;
    poi.surface_normal = unit;
    poi.importance = importance;
    poi.prior_variance = prior;
    return poi;
}

Eigen::Vector3d random_unit(fault::FaultRng& rng) {
    Eigen::Vector3d v(rng.gaussian(), rng.gaussian(), rng.gaussian());
    while (v.norm() < 1e-6) {
        v = Eigen::Vector3d(rng.gaussian(), rng.gaussian(), rng.gaussian());
    }
    return v.normalized();
}

}  // namespace

TEST_CASE("head-on POI is visible, far-side POI is not") {
    const auto body = TargetBody::sphere(2.0);
    const CameraModel camera{M_PI / 6.0, 1000.0};
    const Pose pose{Eigen::Vector3d(100.0, 0.0, 0.0), Eigen::Vector3d(-1.0, 0.0, 0.0)};

    const auto near_poi = sphere_poi(0, Eigen::Vector3d::UnitX(), 2.0);
    const auto far_poi = sphere_poi(1, -Eigen::Vector3d::UnitX(), 2.0);

    CHECK(sense::visible(pose, camera, near_poi, body));
    CHECK_FALSE(sense::visible(pose, camera, far_poi, body));
}

TEST_CASE("POI just outside the FOV cone is rejected") {
    // 31 degrees off boresight with a 30-degree half angle; a tiny occluder
    // far from the line of sight keeps the occlusion term inactive.
    const CameraModel camera{30.0 * M_PI / 180.0, 1000.0};
    const Pose sensor{Eigen::Vector3d(-50.0, 0.0, 0.0), Eigen::Vector3d::UnitX()};
    const auto tiny_body = TargetBody::sphere(1e-3);

    auto poi_at_angle = [&](int id, double angle_deg) {
        const double a = angle_deg * M_PI / 180.0;
        PoiModel poi;
        poi.id = id;
        poi.position = sensor.position + 50.0 * Eigen::Vector3d(std::cos(a), std::sin(a), 0.0);
        poi.surface_normal = (sensor.position - poi.position).normalized();
        poi.prior_variance = 1.0;
        return poi;
    };

    CHECK_FALSE(sense::visible(sensor, camera, poi_at_angle(1, 31.0), tiny_body));
    CHECK(sense::visible(sensor, camera, poi_at_angle(2, 29.0), tiny_body));
}

TEST_CASE("max_range bounds visibility") {
    const auto body = TargetBody::sphere(1.0);
    const CameraModel camera{M_PI / 4.0, 50.0};
    const Pose pose{Eigen::Vector3d(40.0, 0.0, 0.0), Eigen::Vector3d(-1.0, 0.0, 0.0)};
    const auto poi = sphere_poi(0, Eigen::Vector3d::UnitX(), 1.0);
    CHECK(sense::visible(pose, camera, poi, body));

    const Pose far_pose{Eigen::Vector3d(52.0, 0.0, 0.0), Eigen::Vector3d(-1.0, 0.0, 0.0)};
    CHECK_FALSE(sense::visible(far_pose, camera, poi, body));
}

TEST_CASE("sigma is squared distance when visible, +inf otherwise") {
    const auto body = TargetBody::sphere(2.0);
    const CameraModel camera{M_PI / 6.0, 1000.0};
    const auto poi = sphere_poi(0, Eigen::Vector3d::UnitX(), 2.0);

    const Pose pose{Eigen::Vector3d(12.0, 0.0, 0.0), Eigen::Vector3d(-1.0, 0.0, 0.0)};
    CHECK(sense::sigma(pose, camera, poi, body) == doctest::Approx(100.0).epsilon(1e-14));

    const auto hidden = sphere_poi(1, -Eigen::Vector3d::UnitX(), 2.0);
    const double inf_sigma = sense::sigma(pose, camera, hidden, body);
    CHECK(std::isinf(inf_sigma));
    CHECK(1.0 / inf_sigma == 0.0);
}

TEST_CASE("sigma_scale rescales the variance without touching visibility") {
    const auto body = TargetBody::sphere(2.0);
    const auto poi = sphere_poi(0, Eigen::Vector3d::UnitX(), 2.0);
    const Pose pose{Eigen::Vector3d(12.0, 0.0, 0.0), Eigen::Vector3d(-1.0, 0.0, 0.0)};

    const CameraModel unit{M_PI / 6.0, 1000.0, 1.0};
    CameraModel scaled = unit;
    scaled.sigma_scale = 1000.0;

    CHECK(sense::visible(pose, unit, poi, body) == sense::visible(pose, scaled, poi, body));
    CHECK(sense::sigma(pose, scaled, poi, body) ==
          doctest::Approx(1000.0 * sense::sigma(pose, unit, poi, body)).epsilon(1e-14));
}

TEST_CASE("sigma obeys the quadratic distance law") {
    const auto body = TargetBody::sphere(2.0);
    const CameraModel camera{M_PI / 6.0, 1000.0};
    const auto poi = sphere_poi(0, Eigen::Vector3d::UnitX(), 2.0);

    const Pose near{Eigen::Vector3d(12.0, 0.0, 0.0), Eigen::Vector3d(-1.0, 0.0, 0.0)};
    const Pose far{Eigen::Vector3d(22.0, 0.0, 0.0), Eigen::Vector3d(-1.0, 0.0, 0.0)};
    const double ratio =
        sense::sigma(far, camera, poi, body) / sense::sigma(near, camera, poi, body);
    CHECK(ratio == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("sigma finite iff visible, across random geometry") {
    fault::FaultRng rng(7);
    const auto body = TargetBody::sphere(3.0);
    const CameraModel camera{0.4, 200.0};
    for (int trial = 0; trial < 200; ++trial) {
        const Pose pose{(10.0 + 90.0 * rng.uniform()) * random_unit(rng),
                        random_unit(rng)};
        const auto poi = sphere_poi(trial, random_unit(rng), 3.0);
        const double s = sense::sigma(pose, camera, poi, body);
        CHECK(std::isfinite(s) == sense::visible(pose, camera, poi, body));
        CHECK(s >= 0.0);
    }
}

TEST_CASE("visible_set equals the brute-force per-POI predicate") {
    fault::FaultRng rng(21);
    const auto body = TargetBody::sphere(5.0);
    const CameraModel camera{0.5, 500.0};

    std::vector<PoiModel> pois;
    for (int k = 0; k < 100; ++k) {
        pois.push_back(sphere_poi(k, random_unit(rng), 5.0));
    }
    const Pose pose{Eigen::Vector3d(40.0, 10.0, 5.0),
                    (-Eigen::Vector3d(40.0, 10.0, 5.0)).normalized()};

    const auto set = sense::visible_set(pose, camera, pois, body);
    for (const auto& poi : pois) {
        CHECK(set.count(poi.id) == (sense::visible(pose, camera, poi, body) ? 1 : 0));
    }
    CHECK_FALSE(set.empty());

    // Permutation invariance.
    std::vector<PoiModel> reversed(pois.rbegin(), pois.rend());
    CHECK(sense::visible_set(pose, camera, reversed, body) == set);

    // Empty list.
    CHECK(sense::visible_set(pose, camera, std::vector<PoiModel>{}, body).empty());
}

TEST_CASE("visibility is equivariant under a common rotation") {
    fault::FaultRng rng(5);
    const auto body = TargetBody::sphere(4.0);
    const CameraModel camera{0.3, 300.0};

    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Vector3d axis = random_unit(rng);
        const double angle = 2.0 * M_PI * rng.uniform();
        const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, axis).toRotationMatrix();

        const Eigen::Vector3d pos = (20.0 + 60.0 * rng.uniform()) * random_unit(rng);
        const auto poi = sphere_poi(0, random_unit(rng), 4.0);
        const Pose pose = sense::point_at(pos, poi.position);

        PoiModel rpoi = poi;
        rpoi.position = rot * poi.position;
        rpoi.surface_normal = rot * poi.surface_normal;
        const Pose rpose{rot * pose.position, rot * pose.boresight};

        CHECK(sense::visible(pose, camera, poi, body) ==
              sense::visible(rpose, camera, rpoi, body));
        const double s0 = sense::sigma(pose, camera, poi, body);
        const double s1 = sense::sigma(rpose, camera, rpoi, body);
        if (std::isfinite(s0)) {
            CHECK(s1 == doctest::Approx(s0).epsilon(1e-9));
        } else {
            CHECK(std::isinf(s1));
        }
    }
}

TEST_CASE("enlarging the FOV or range never shrinks the visible set") {
    fault::FaultRng rng(11);
    const auto body = TargetBody::sphere(5.0);
    std::vector<PoiModel> pois;
    for (int k = 0; k < 80; ++k) {
        pois.push_back(sphere_poi(k, random_unit(rng), 5.0));
    }
    const Pose pose = sense::point_at(Eigen::Vector3d(30.0, -20.0, 8.0),
                                      pois[3].position);

    const CameraModel narrow{0.15, 30.0};
    const CameraModel wide{0.45, 30.0};
    const CameraModel long_range{0.15, 90.0};

    const auto base = sense::visible_set(pose, narrow, pois, body);
    const auto wider = sense::visible_set(pose, wide, pois, body);
    const auto longer = sense::visible_set(pose, long_range, pois, body);
    for (int id : base) {
        CHECK(wider.count(id) == 1);
        CHECK(longer.count(id) == 1);
    }
}

TEST_CASE("point_at normalizes and rejects degenerate input") {
    const auto p1 = sense::point_at(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d::Zero());
    CHECK(p1.boresight == Eigen::Vector3d(-1, 0, 0));

    const auto p2 = sense::point_at(Eigen::Vector3d::Zero(), Eigen::Vector3d(3, 4, 0));
    CHECK(p2.boresight.x() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(p2.boresight.y() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(p2.boresight.z() == 0.0);

    CHECK_THROWS_AS(sense::point_at(Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 1, 1)),
                    DegeneratePointingError);
}

TEST_CASE("box occluder blocks through-segments but not surface endpoints") {
    const auto body = TargetBody::box(Eigen::Vector3d(2.0, 1.0, 1.0));

    // Straight through the box.
    CHECK(body.blocks_segment(Eigen::Vector3d(-5, 0, 0), Eigen::Vector3d(5, 0, 0)));
    // Segment ending on a face from outside.
    CHECK_FALSE(body.blocks_segment(Eigen::Vector3d(5, 0, 0), Eigen::Vector3d(2.0, 0, 0)));
    // Passing beside the box.
    CHECK_FALSE(body.blocks_segment(Eigen::Vector3d(-5, 3, 0), Eigen::Vector3d(5, 3, 0)));

    // Surface projection and signed distance.
    CHECK(body.signed_surface_distance(Eigen::Vector3d(2.0, 0, 0)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(body.signed_surface_distance(Eigen::Vector3d(4.0, 0, 0)) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(body.signed_surface_distance(Eigen::Vector3d(0, 0, 0)) < 0.0);
    const auto projected = body.project_to_surface(Eigen::Vector3d(4.0, 0.5, 0.0));
    CHECK(projected == Eigen::Vector3d(2.0, 0.5, 0.0));
}

TEST_CASE("measurements carry the sigma of their generating geometry") {
    const auto body = TargetBody::sphere(2.0);
    const CameraModel camera{M_PI / 6.0, 1000.0};
    const auto poi = sphere_poi(4, Eigen::Vector3d::UnitX(), 2.0);
    const Pose pose{Eigen::Vector3d(12.0, 0.0, 0.0), Eigen::Vector3d(-1.0, 0.0, 0.0)};

    const auto m = sense::make_measurement(7, pose, camera, poi, body, 0.42);
    CHECK(m.observer_id == 7);
    CHECK(m.poi_id == 4);
    CHECK(m.value == 0.42);
    CHECK(m.noise_variance == sense::sigma(pose, camera, poi, body));
}

TEST_CASE("sphere projection lands on the surface") {
    const auto body = TargetBody::sphere(5.0);
    const auto q = body.project_to_surface(Eigen::Vector3d(1.0, 2.0, -3.0));
    CHECK(q.norm() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(body.project_to_surface(Eigen::Vector3d::Zero()).norm() ==
          doctest::Approx(5.0).epsilon(1e-12));
}
