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

#pragma once

#include "rislab/errors.hpp"
#include "rislab/types.hpp"

#include <cmath>
#include <string>

namespace rislab
{
// Trigonometry in degrees that is exact at multiples of 90 degrees, so that
// grazing directions produce exact zeros in element tapers.
template <typename Scalar>
Scalar cos_deg(Scalar deg)
{
    const Scalar r = std::fmod(deg, Scalar(360));
    if (r == Scalar(90) || r == Scalar(-90) || r == Scalar(270) || r == Scalar(-270))
        return Scalar(0);
    return std::cos(deg2rad(deg));
}

template <typename Scalar>
Scalar sin_deg(Scalar deg)
{
    const Scalar r = std::fmod(deg, Scalar(360));
    if (r == Scalar(0) || r == Scalar(180) || r == Scalar(-180))
        return Scalar(0);
    return std::sin(deg2rad(deg));
}

// Departure/arrival direction. Elevation is measured from the array normal (+z),
// so elevation 0 is broadside. Azimuth is wrapped into [0, 360).
template <typename Scalar>
class Direction
{
  public:
    Direction(Scalar azimuth_deg, Scalar elevation_deg)
    {
        if (!std::isfinite(azimuth_deg) || !std::isfinite(elevation_deg))
            throw InvalidArgument("Direction: angles must be finite");
        if (elevation_deg < Scalar(-90) || elevation_deg > Scalar(90))
            throw InvalidArgument("Direction: elevation must lie in [-90, 90] degrees, got " +
                                  std::to_string(double(elevation_deg)));
        azimuth_deg_ = std::fmod(azimuth_deg, Scalar(360));
        if (azimuth_deg_ < Scalar(0))
            azimuth_deg_ += Scalar(360);
        if (azimuth_deg_ >= Scalar(360))
            azimuth_deg_ = Scalar(0);
        elevation_deg_ = elevation_deg;
    }

    Scalar azimuth_deg() const { return azimuth_deg_; }
    Scalar elevation_deg() const { return elevation_deg_; }
    Scalar azimuth() const { return deg2rad(azimuth_deg_); }
    Scalar elevation() const { return deg2rad(elevation_deg_); }

  private:
    Scalar azimuth_deg_;
    Scalar elevation_deg_;
};

// u = [sin(el) cos(az), sin(el) sin(az), cos(el)]
template <typename Scalar>
Vector3<Scalar> unit_vector(const Direction<Scalar> &dir)
{
    const Scalar se = sin_deg(dir.elevation_deg());
    return {se * cos_deg(dir.azimuth_deg()), se * sin_deg(dir.azimuth_deg()), cos_deg(dir.elevation_deg())};
}

// Uniform planar array in the x-y plane, centred on the origin.
// Element n = r * cols + c sits at x = (c - (cols-1)/2) * spacing,
// y = (r - (rows-1)/2) * spacing, counting from the (-x, -y) corner.
template <typename Scalar>
class RisArray
{
  public:
    RisArray(Index rows, Index cols, Scalar spacing)
        : rows_(rows), cols_(cols), spacing_(spacing)
    {
        if (rows < 1 || cols < 1)
            throw InvalidArgument("RisArray: rows and cols must be at least 1");
        if (!(spacing > Scalar(0)) || !std::isfinite(spacing))
            throw InvalidArgument("RisArray: spacing must be positive");

        positions_.setZero(3, rows * cols);
        const Scalar r0 = Scalar(rows - 1) / Scalar(2);
        const Scalar c0 = Scalar(cols - 1) / Scalar(2);
        for (Index r = 0; r < rows; ++r)
            for (Index c = 0; c < cols; ++c)
            {
                positions_(0, index(r, c)) = (Scalar(c) - c0) * spacing;
                positions_(1, index(r, c)) = (Scalar(r) - r0) * spacing;
            }
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index size() const { return rows_ * cols_; }
    Scalar spacing() const { return spacing_; }
    Index index(Index row, Index col) const { return row * cols_ + col; }

    const Positions<Scalar> &positions() const { return positions_; }
    auto position(Index n) const { return positions_.col(n); }

  private:
    Index rows_;
    Index cols_;
    Scalar spacing_;
    Positions<Scalar> positions_;
};

template <typename Scalar>
RisArray<Scalar> build_array(Index rows, Index cols, Scalar spacing)
{
    return RisArray<Scalar>(rows, cols, spacing);
}

// Transmit horn. The horn boresight is aimed at the array centre.
template <typename Scalar>
struct FeedPlacement
{
    Vector3<Scalar> position;
    Vector3<Scalar> boresight;
    Scalar distance;
    Direction<Scalar> incident;
};

template <typename Scalar>
FeedPlacement<Scalar> place_feed(const Direction<Scalar> &incident, Scalar distance)
{
    if (!(distance > Scalar(0)) || !std::isfinite(distance))
        throw InvalidArgument("place_feed: distance must be positive");
    const Vector3<Scalar> u = unit_vector(incident);
    const Vector3<Scalar> position = distance * u;
    return {position, -position.normalized(), distance, incident};
}

// Angle in [0, pi] between a direction a and a direction b.
template <typename Derived1, typename Derived2>
typename Derived1::Scalar angle_between(const Eigen::MatrixBase<Derived1> &a, const Eigen::MatrixBase<Derived2> &b)
{
    using std::atan2;
    return atan2(a.cross(b).norm(), a.dot(b));
}

// Elevation of the ray from the horn to an element, in the horn's own frame.
template <typename Scalar, typename Derived>
Scalar feed_elevation_to_element(const FeedPlacement<Scalar> &feed, const Eigen::MatrixBase<Derived> &element)
{
    const Vector3<Scalar> ray = element - feed.position;
    if (ray.norm() == Scalar(0))
        throw InvalidArgument("feed_elevation_to_element: element coincides with the feed");
    return angle_between(ray, feed.boresight);
}

} // namespace rislab
