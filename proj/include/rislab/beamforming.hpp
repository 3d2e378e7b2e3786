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

#include "rislab/network.hpp"
#include "rislab/pattern.hpp"

namespace rislab
{
// Measured 1-bit unit-cell responses. Phases are kept wrapped to [0, 360).
class UnitCellStates
{
  public:
    UnitCellStates(double phase_on_deg, double phase_off_deg, double mag_on, double mag_off);

    double phase_on_deg() const { return phase_on_deg_; }
    double phase_off_deg() const { return phase_off_deg_; }
    double mag_on() const { return mag_on_; }
    double mag_off() const { return mag_off_; }

    Complex<double> on() const;
    Complex<double> off() const;

    // True when a phase lies in the half-open arc (off, on], traversed counterclockwise.
    bool selects_on(double phase_deg) const;

  private:
    double phase_on_deg_;
    double phase_off_deg_;
    double mag_on_;
    double mag_off_;
};

// Phases closer than this to an arc endpoint are treated as sitting on it.
inline constexpr double kPhaseEndpointTolerance = 1e-9; // degrees

double wrap_degrees(double deg);

// Unit-magnitude design that co-phases every element towards `target`:
// arg(Theta_n) = -arg(h_out,n(target) h_in,n).
ReflectionState<double> continuous_phase_design(const Scenario &scenario, const Direction<double> &target);

// Maps each coefficient to the ON or OFF cell response according to its phase.
ReflectionState<double> quantize_one_bit(const ReflectionState<double> &state, const UnitCellStates &cells);

} // namespace rislab
