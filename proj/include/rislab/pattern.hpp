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

#include "rislab/geometry.hpp"
#include "rislab/network.hpp"
#include "rislab/types.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace rislab
{
// Operating point: carrier, horn placement, directivity exponents and array.
struct Scenario
{
    double frequency_hz;
    FeedPlacement<double> feed;
    double q_e = 1;  // element power-pattern exponent
    double q_f = 25; // horn power-pattern exponent (about 20 dBi)
    RisArray<double> array;

    double wavelength() const { return rislab::wavelength(frequency_hz); }
    double wavenumber() const { return rislab::wavenumber(frequency_hz); }
    void validate() const;
};

// Elevation cut at a fixed azimuth.
class PatternGrid
{
  public:
    explicit PatternGrid(std::vector<double> elevations_deg, double azimuth_deg = 90);

    // Inclusive grid from min to max; (max - min) must be a whole number of steps.
    static PatternGrid uniform(double el_min_deg, double el_max_deg, double step_deg, double azimuth_deg = 90);
    static PatternGrid standard() { return uniform(-90, 90, 0.5); }

    double azimuth_deg() const { return azimuth_deg_; }
    const std::vector<double> &elevations_deg() const { return elevations_deg_; }
    Index size() const { return Index(elevations_deg_.size()); }
    Direction<double> direction(Index i) const { return {azimuth_deg_, elevations_deg_[std::size_t(i)]}; }

    bool operator==(const PatternGrid &) const = default;

  private:
    std::vector<double> elevations_deg_;
    double azimuth_deg_;
};

struct PatternTrace
{
    PatternGrid grid;
    VectorXcd field;
    VectorXd normalized_db; // 20 log10(|E| / max |E|)

    // |E| / max |E|
    VectorXd normalized_magnitude() const;
};

// Normalise a sampled field over the cut. Throws DegeneratePattern if it is identically zero.
PatternTrace make_trace(PatternGrid grid, VectorXcd field);

// h_in: cos^{q_f}(theta_f,n) / |p_n - p_f| * exp(-j k |p_n - p_f|)
VectorXcd channel_in(const Scenario &scenario);

// h_out(theta): cos^{q_e}(theta_el) * exp(j k p_n^T u(theta))
VectorXcd channel_out(const Scenario &scenario, const Direction<double> &dir);

// Rows are h_out(theta_l)^T for every sample of the grid (L x N).
MatrixXcd steering_matrix(const Scenario &scenario, const PatternGrid &grid);

PatternTrace pattern_conventional(const Scenario &scenario, const ReflectionState<double> &state,
                                  const PatternGrid &grid);

PatternTrace pattern_coupled(const Scenario &scenario, const ReflectionState<double> &state, const MatrixXcd &s_ii,
                             const PatternGrid &grid);

PatternTrace pattern_coupled(const Scenario &scenario, const CoupledSystem<double> &system, const PatternGrid &grid);

// Largest normalised level outside the main lobe, in dB. The main lobe is the
// run of samples around the global maximum that descends monotonically to the
// nearest local minimum on each side. Empty when no sample lies outside it.
std::optional<double> side_lobe_level(const PatternTrace &trace);

// CSV: theta_el_deg,re,im,norm_db with 17 significant digits.
void write_trace_csv(std::ostream &out, const PatternTrace &trace);

} // namespace rislab
