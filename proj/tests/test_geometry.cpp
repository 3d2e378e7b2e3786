// SPDX-License-Identifier: Apache-2.0
//
// ris-lab: mutual coupling models for RIS-aided links
// Copyright (C) 2026 The ris-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rislab/geometry.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace rislab;

TEST_CASE("unit vectors follow the broadside-elevation convention")
{
    CHECK(unit_vector(Direction<double>(0, 0)).isApprox(Vector3d(0, 0, 1)));
    CHECK((unit_vector(Direction<double>(90, 90)) - Vector3d(0, 1, 0)).norm() == 0.0);
    const Vector3d u = unit_vector(Direction<double>(90, 30));
    CHECK(u.x() == doctest::Approx(0).epsilon(1e-15));
    CHECK(u.y() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(u.z() == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> az(-720, 720), el(-90, 90);
    for (int i = 0; i < 1000; ++i)
        CHECK(std::abs(unit_vector(Direction<double>(az(rng), el(rng))).norm() - 1) <= 1e-12);
}

TEST_CASE("directions validate and wrap")
{
    CHECK_THROWS_AS(Direction<double>(0, 90.5), InvalidArgument);
    CHECK_THROWS_AS(Direction<double>(0, -91), InvalidArgument);
    CHECK_THROWS_AS(Direction<double>(std::nan(""), 0), InvalidArgument);
    CHECK(Direction<double>(-90, 10).azimuth_deg() == 270);
    CHECK(Direction<double>(360, 10).azimuth_deg() == 0);
    CHECK(Direction<double>(725, 10).azimuth_deg() == doctest::Approx(5));
}

TEST_CASE("array layout is centred, row-major and planar")
{
    const RisArray<double> one = build_array(1, 1, 0.005);
    CHECK(one.size() == 1);
    CHECK(one.position(0).norm() == 0.0);

    const RisArray<double> a = build_array<double>(20, 20, 0.00382);
    CHECK(a.size() == 400);
    CHECK(a.positions().cols() == 400);
    CHECK(a.positions().row(0).minCoeff() == doctest::Approx(-9.5 * 0.00382).epsilon(1e-14));
    CHECK(a.positions().row(0).maxCoeff() == doctest::Approx(9.5 * 0.00382).epsilon(1e-14));
    CHECK(a.positions().row(2).isZero(0));
    // row-major: consecutive indices step along x
    CHECK(a.position(1).x() - a.position(0).x() == doctest::Approx(0.00382));
    CHECK(a.position(20).y() - a.position(0).y() == doctest::Approx(0.00382));
    for (Index n = 0; n < a.size(); ++n)
    {
        double nearest = 1;
        for (Index m = 0; m < a.size(); ++m)
            if (m != n)
                nearest = std::min(nearest, (a.position(n) - a.position(m)).norm());
        CHECK(std::abs(nearest - 0.00382) <= 1e-12);
    }

    const RisArray<double> sq = build_array(2, 2, 0.01);
    std::set<long long> distances;
    for (Index n = 0; n < 4; ++n)
        for (Index m = n + 1; m < 4; ++m)
            distances.insert(std::llround((sq.position(n) - sq.position(m)).norm() * 1e12));
    CHECK(distances == std::set<long long>{std::llround(0.01 * 1e12), std::llround(0.01 * std::sqrt(2.0) * 1e12)});

    CHECK_THROWS_AS(build_array(0, 3, 0.01), InvalidArgument);
    CHECK_THROWS_AS(build_array(3, 3, 0.0), InvalidArgument);
    CHECK_THROWS_AS(build_array(3, 3, -1.0), InvalidArgument);
}

TEST_CASE("feed placement")
{
    const FeedPlacement<double> normal = place_feed(Direction<double>(90, 0), 0.18);
    CHECK((normal.position - Vector3d(0, 0, 0.18)).norm() <= 1e-15);
    CHECK((normal.boresight - Vector3d(0, 0, -1)).norm() <= 1e-15);

    const FeedPlacement<double> p1 = place_feed(Direction<double>(90, 20), 0.18);
    CHECK(p1.position.x() == doctest::Approx(0).epsilon(1e-15));
    CHECK(p1.position.y() == doctest::Approx(0.06156).epsilon(1e-4));
    CHECK(p1.position.z() == doctest::Approx(0.16914).epsilon(1e-4));

    const FeedPlacement<double> p3 = place_feed(Direction<double>(90, 30), 0.18);
    CHECK(p3.position.y() == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(p3.position.z() == doctest::Approx(0.15588).epsilon(1e-4));
    CHECK(std::abs(p3.boresight.norm() - 1) <= 1e-12);
    CHECK((p3.boresight + p3.position / p3.position.norm()).norm() <= 1e-12);

    CHECK_THROWS_AS(place_feed(Direction<double>(0, 0), 0.0), InvalidArgument);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> el(-89, 89), az(0, 360);
    for (int i = 0; i < 200; ++i)
    {
        const double e = el(rng);
        const FeedPlacement<double> f = place_feed(Direction<double>(az(rng), e), 0.3);
        const Vector3d back = -f.position;
        const double angle = std::acos(-back.z() / back.norm());
        CHECK(std::abs(angle - std::abs(deg2rad(e))) <= 1e-9);
    }
}

TEST_CASE("feed elevation towards elements")
{
    const FeedPlacement<double> normal = place_feed(Direction<double>(90, 0), 0.18);
    CHECK(feed_elevation_to_element(normal, Vector3d(0, 0, 0)) == doctest::Approx(0).epsilon(1e-15));
    CHECK(feed_elevation_to_element(normal, Vector3d(0.01, 0, 0)) ==
          doctest::Approx(std::atan(0.01 / 0.18)).epsilon(1e-12));
    CHECK(feed_elevation_to_element(normal, Vector3d(0.01, 0, 0)) == doctest::Approx(0.05551).epsilon(1e-4));
    CHECK_THROWS_AS(feed_elevation_to_element(normal, normal.position), InvalidArgument);

    const FeedPlacement<double> p1 = place_feed(Direction<double>(90, 20), 0.18);
    const RisArray<double> a = build_array<double>(20, 20, 0.00382);
    const Vector3d corner = a.position(0);
    const Vector3d ray = corner - p1.position;
    const double oracle = std::acos(ray.dot(p1.boresight) / ray.norm());
    CHECK(feed_elevation_to_element(p1, corner) == doctest::Approx(oracle).epsilon(1e-12));

    // rigid rotation of feed and element together
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Vector3d(1, 2, 3).normalized()).toRotationMatrix();
    FeedPlacement<double> rotated = p1;
    rotated.position = rot * p1.position;
    rotated.boresight = rot * p1.boresight;
    CHECK(feed_elevation_to_element(rotated, rot * corner) ==
          doctest::Approx(feed_elevation_to_element(p1, corner)).epsilon(1e-12));
}
