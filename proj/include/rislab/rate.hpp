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

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

namespace rislab
{
// SISO link budget. Noise variances are per Hz, in mW.
struct LinkBudget
{
    double p_t_dbm = 0;
    double nf_db = 10;
    double n0_dbm_per_hz = -174;
    Vector3d rx_position = Vector3d(0, 0, 100);
    double calibration = 1; // amplitude factor on the Tx-to-RIS hop
    double sigma_r_sq;      // RIS noise
    double sigma_0_sq;      // receiver noise

    LinkBudget() : LinkBudget(0, 10, -174) {}
    LinkBudget(double p_t_dbm, double nf_db, double n0_dbm_per_hz, Vector3d rx_position = Vector3d(0, 0, 100),
               double calibration = 1);

    double p_t_mw() const { return std::pow(10.0, p_t_dbm / 10.0); }
    Direction<double> rx_direction() const;
    void validate() const;
};

// SNR with the coupled response (Theta^-1 - S_II)^-1 in place of Theta.
double snr_coupled(const VectorXcd &h_ri, const VectorXcd &h_it, const CoupledSystem<double> &system,
                   const LinkBudget &budget);
double snr_coupled(const VectorXcd &h_ri, const VectorXcd &h_it, const ReflectionState<double> &state,
                   const MatrixXcd &s_ii, const LinkBudget &budget);

double snr_uncoupled(const VectorXcd &h_ri, const VectorXcd &h_it, const ReflectionState<double> &state,
                     const LinkBudget &budget);

// log2(1 + gamma)
double achievable_rate(double gamma);

// RIS-to-Rx channel: lambda/(4 pi) * cos^{q_e}(theta_n) / r_n * exp(-j k r_n)
VectorXcd rx_channel(const Scenario &scenario, const LinkBudget &budget);

// Tx-to-RIS channel: calibration * lambda/(4 pi) * h_in
VectorXcd tx_channel(const Scenario &scenario, const LinkBudget &budget);

struct NamedDesign
{
    std::string name;
    ReflectionState<double> state;
};

struct RateRow
{
    std::string design;
    double frequency_hz;
    double p;
    double rate_no_mc;
    double rate_mc;

    double gap() const { return rate_no_mc - rate_mc; }
};

// Quantized and continuous designs steering towards `target`.
std::vector<NamedDesign> prototype_designs(const Scenario &scenario, const UnitCellStates &cells,
                                           const Direction<double> &target);

// Rows ordered by design, then p. Each design is reused across p with Theta scaled by p.
std::vector<RateRow> sweep_amplification(const Scenario &scenario, const std::vector<NamedDesign> &designs,
                                         const CouplingModel<double> &model, const LinkBudget &budget,
                                         const std::vector<double> &p_values, unsigned threads = 0);

struct FrequencyCase
{
    Scenario scenario;
    UnitCellStates cells;
};

// Both prototype designs at p = 1 for every case, steered towards the receiver.
std::vector<RateRow> sweep_frequency(const std::vector<FrequencyCase> &cases, const CouplingModel<double> &model,
                                     const LinkBudget &budget, unsigned threads = 0);

// Calibration that makes the coupling-unaware rate of `state` equal `target_rate`.
double calibration_for_rate(const Scenario &scenario, const ReflectionState<double> &state, LinkBudget budget,
                            double target_rate);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

// CSV: design,frequency_hz,p,rate_no_mc_bpshz,rate_mc_bpshz,gap_bpshz
void write_rate_csv(std::ostream &out, const std::vector<RateRow> &rows);

} // namespace rislab
