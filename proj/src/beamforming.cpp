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

#include "rislab/beamforming.hpp"

#include "rislab/errors.hpp"

#include <cmath>

namespace rislab
{
double wrap_degrees(double deg)
{
    double w = std::fmod(deg, 360.0);
    if (w < 0)
        w += 360.0;
    if (w >= 360.0)
        w = 0.0;
    return w;
}

UnitCellStates::UnitCellStates(double phase_on_deg, double phase_off_deg, double mag_on, double mag_off)
    : phase_on_deg_(wrap_degrees(phase_on_deg)), phase_off_deg_(wrap_degrees(phase_off_deg)), mag_on_(mag_on),
      mag_off_(mag_off)
{
    if (!std::isfinite(phase_on_deg) || !std::isfinite(phase_off_deg))
        throw InvalidArgument("UnitCellStates: phases must be finite");
    if (!(mag_on > 0) || !(mag_off > 0) || !std::isfinite(mag_on) || !std::isfinite(mag_off))
        throw InvalidArgument("UnitCellStates: magnitudes must be positive");
    if (std::abs(wrap_degrees(phase_on_deg_ - phase_off_deg_)) <= kPhaseEndpointTolerance ||
        std::abs(wrap_degrees(phase_on_deg_ - phase_off_deg_) - 360.0) <= kPhaseEndpointTolerance)
        throw InvalidArgument("UnitCellStates: ON and OFF phases coincide (degenerate cell)");
}

Complex<double> UnitCellStates::on() const { return std::polar(mag_on_, deg2rad(phase_on_deg_)); }

Complex<double> UnitCellStates::off() const { return std::polar(mag_off_, deg2rad(phase_off_deg_)); }

bool UnitCellStates::selects_on(double phase_deg) const
{
    const double offset = wrap_degrees(phase_deg - phase_off_deg_);
    const double span = wrap_degrees(phase_on_deg_ - phase_off_deg_);
    // Offsets just below 360 are the OFF endpoint approached from below.
    if (offset > 360.0 - kPhaseEndpointTolerance || offset <= kPhaseEndpointTolerance)
        return false;
    return offset <= span + kPhaseEndpointTolerance;
}

ReflectionState<double> continuous_phase_design(const Scenario &scenario, const Direction<double> &target)
{
    const VectorXcd path = channel_out(scenario, target).cwiseProduct(channel_in(scenario));
    ReflectionState<double> state;
    state.theta_diag.resize(path.size());
    for (Index n = 0; n < path.size(); ++n)
        state.theta_diag(n) = std::polar(1.0, -std::arg(path(n)));
    return state;
}

ReflectionState<double> quantize_one_bit(const ReflectionState<double> &state, const UnitCellStates &cells)
{
    ReflectionState<double> out;
    out.amplification = state.amplification;
    out.theta_diag.resize(state.size());
    const Complex<double> on = cells.on();
    const Complex<double> off = cells.off();
    for (Index n = 0; n < state.size(); ++n)
    {
        const Complex<double> theta = state.theta_diag(n);
        if (!std::isfinite(theta.real()) || !std::isfinite(theta.imag()))
            throw InvalidArgument("quantize_one_bit: non-finite phase");
        out.theta_diag(n) = cells.selects_on(rad2deg(std::arg(theta))) ? on : off;
    }
    return out;
}

} // namespace rislab
