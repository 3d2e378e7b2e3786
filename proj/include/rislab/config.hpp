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

#include "rislab/beamforming.hpp"
#include "rislab/network.hpp"
#include "rislab/pattern.hpp"
#include "rislab/rate.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace rislab
{
// Coupling section of a scenario file. h and d may be left out when only the
// coupling-unaware model is needed.
struct CouplingConfig
{
    std::optional<double> h_m;
    std::optional<double> d_m;
    double z0_ohm = 50;
    Index quadrature_points = 512;
    std::optional<Complex<double>> self_impedance_ohm;
};

struct ScenarioConfig
{
    std::string source;
    Scenario scenario;
    std::optional<UnitCellStates> cells;
    CouplingConfig coupling;
    LinkBudget budget;
    PatternGrid grid = PatternGrid::standard();

    // Throws ConfigError naming coupling.h_m / coupling.d_m when absent.
    CouplingModel<double> coupling_model() const;
    // Only z0, quadrature and self impedance; h and d left at zero.
    CouplingModel<double> coupling_base() const;
    // Throws ConfigError naming `cells` when absent.
    const UnitCellStates &unit_cells() const;
};

// Required: array, frequency_hz, feed. Unknown keys are rejected.
ScenarioConfig parse_config(std::string_view json_text, const std::string &source = "<config>");
ScenarioConfig load_config(const std::filesystem::path &path);

// Directory holding the bundled presets and unit-cell table.
std::filesystem::path data_directory();

} // namespace rislab
