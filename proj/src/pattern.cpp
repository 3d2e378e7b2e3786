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

#include "rislab/pattern.hpp"

#include "rislab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace rislab
{
void Scenario::validate() const
{
    if (!(frequency_hz > 0) || !std::isfinite(frequency_hz))
        throw InvalidArgument("Scenario: frequency must be positive");
    if (!(q_e >= 0) || !(q_f >= 0))
        throw InvalidArgument("Scenario: directivity exponents must be non-negative");
}

PatternGrid::PatternGrid(std::vector<double> elevations_deg, double azimuth_deg)
    : elevations_deg_(std::move(elevations_deg)), azimuth_deg_(azimuth_deg)
{
    if (elevations_deg_.size() < 2)
        throw InvalidArgument("PatternGrid: need at least two elevation samples");
    for (std::size_t i = 0; i < elevations_deg_.size(); ++i)
    {
        const double el = elevations_deg_[i];
        if (!(el >= -90 && el <= 90))
            throw InvalidArgument("PatternGrid: elevation outside [-90, 90] degrees");
        if (i > 0 && !(el > elevations_deg_[i - 1]))
            throw InvalidArgument("PatternGrid: elevations must be strictly increasing");
    }
    // Normalises the azimuth the same way Direction does.
    azimuth_deg_ = Direction<double>(azimuth_deg, 0).azimuth_deg();
}

PatternGrid PatternGrid::uniform(double el_min_deg, double el_max_deg, double step_deg, double azimuth_deg)
{
    if (!(step_deg > 0) || !(el_max_deg > el_min_deg))
        throw InvalidArgument("PatternGrid: need step > 0 and max > min");
    const double steps = (el_max_deg - el_min_deg) / step_deg;
    const double whole = std::round(steps);
    if (std::abs(steps - whole) > 1e-9 * std::max(1.0, whole))
        throw InvalidArgument("PatternGrid: range is not a whole number of steps");
    std::vector<double> els(std::size_t(whole) + 1);
    for (std::size_t i = 0; i < els.size(); ++i)
        els[i] = el_min_deg + double(i) * step_deg;
    els.back() = el_max_deg;
    return PatternGrid(std::move(els), azimuth_deg);
}

VectorXd PatternTrace::normalized_magnitude() const
{
    const VectorXd mag = field.cwiseAbs();
    return mag / mag.maxCoeff();
}

PatternTrace make_trace(PatternGrid grid, VectorXcd field)
{
    if (field.size() != grid.size())
        throw InvalidArgument("make_trace: field and grid sizes differ");
    if (!field.allFinite())
        throw DegeneratePattern("make_trace: non-finite field samples");
    const VectorXd mag = field.cwiseAbs();
    const double peak = mag.maxCoeff();
    if (!(peak > 0))
        throw DegeneratePattern("make_trace: field is identically zero, cannot normalise");
    VectorXd db(mag.size());
    for (Index i = 0; i < mag.size(); ++i)
        db(i) = mag(i) == peak ? 0.0 : 20.0 * std::log10(mag(i) / peak);
    return {std::move(grid), std::move(field), std::move(db)};
}

VectorXcd channel_in(const Scenario &scenario)
{
    scenario.validate();
    const double k = scenario.wavenumber();
    const auto &p = scenario.array.positions();
    VectorXcd h(p.cols());
    for (Index n = 0; n < p.cols(); ++n)
    {
        const Vector3d ray = p.col(n) - scenario.feed.position;
        const double dist = ray.norm();
        if (dist == 0)
            throw InvalidArgument("channel_in: feed coincides with an element");
        const double cos_off_axis = std::max(0.0, std::cos(angle_between(ray, scenario.feed.boresight)));
        const double taper = std::pow(cos_off_axis, scenario.q_f);
        h(n) = std::polar(taper / dist, -k * dist);
    }
    return h;
}

VectorXcd channel_out(const Scenario &scenario, const Direction<double> &dir)
{
    scenario.validate();
    const double k = scenario.wavenumber();
    const Vector3d u = unit_vector(dir);
    const double taper = std::pow(cos_deg(dir.elevation_deg()), scenario.q_e);
    const VectorXd phase = k * (scenario.array.positions().transpose() * u);
    VectorXcd h(phase.size());
    for (Index n = 0; n < phase.size(); ++n)
        h(n) = std::polar(taper, phase(n));
    return h;
}

MatrixXcd steering_matrix(const Scenario &scenario, const PatternGrid &grid)
{
    MatrixXcd out(grid.size(), scenario.array.size());
    for (Index l = 0; l < grid.size(); ++l)
        out.row(l) = channel_out(scenario, grid.direction(l)).transpose();
    return out;
}

namespace
{
void check_state(const Scenario &scenario, Index n)
{
    if (n != scenario.array.size())
        throw InvalidArgument("pattern: reflection state size does not match the array");
}
} // namespace

PatternTrace pattern_conventional(const Scenario &scenario, const ReflectionState<double> &state,
                                  const PatternGrid &grid)
{
    check_state(scenario, state.size());
    state.validate();
    const VectorXcd reflected = state.effective().cwiseProduct(channel_in(scenario));
    return make_trace(grid, steering_matrix(scenario, grid) * reflected);
}

PatternTrace pattern_coupled(const Scenario &scenario, const CoupledSystem<double> &system, const PatternGrid &grid)
{
    check_state(scenario, system.size());
    const VectorXcd reflected = system.solve(channel_in(scenario));
    return make_trace(grid, steering_matrix(scenario, grid) * reflected);
}

PatternTrace pattern_coupled(const Scenario &scenario, const ReflectionState<double> &state, const MatrixXcd &s_ii,
                             const PatternGrid &grid)
{
    check_state(scenario, state.size());
    return pattern_coupled(scenario, CoupledSystem<double>(state, s_ii), grid);
}

std::optional<double> side_lobe_level(const PatternTrace &trace)
{
    const VectorXd &db = trace.normalized_db;
    const Index n = db.size();
    Index peak = 0;
    for (Index i = 1; i < n; ++i)
        if (db(i) > db(peak))
            peak = i;

    // Walk down each flank; equal samples are absorbed so a plateau ends at its far edge.
    Index lo = peak;
    while (lo > 0 && db(lo - 1) <= db(lo))
        --lo;
    Index hi = peak;
    while (hi + 1 < n && db(hi + 1) <= db(hi))
        ++hi;

    std::optional<double> level;
    for (Index i = 0; i < n; ++i)
    {
        if (i >= lo && i <= hi)
            continue;
        if (!level || db(i) > *level)
            level = db(i);
    }
    return level;
}

void write_trace_csv(std::ostream &out, const PatternTrace &trace)
{
    out << "theta_el_deg,re,im,norm_db\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Index l = 0; l < trace.grid.size(); ++l)
        out << trace.grid.elevations_deg()[std::size_t(l)] << ',' << trace.field(l).real() << ','
            << trace.field(l).imag() << ',' << trace.normalized_db(l) << '\n';
}

} // namespace rislab
