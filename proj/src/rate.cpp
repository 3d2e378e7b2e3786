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

#include "rislab/rate.hpp"

#include "rislab/errors.hpp"
#include "rislab/parallel.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>

namespace rislab
{
namespace
{
double hop_constant(const Scenario &scenario) { return scenario.wavelength() / (4 * std::numbers::pi); }

void check_channels(const VectorXcd &h_ri, const VectorXcd &h_it, Index n, const char *context)
{
    if (h_ri.size() != n || h_it.size() != n)
        throw InvalidArgument(std::string(context) + ": channel sizes do not match the surface");
}

double snr(double p_t, double signal, double leak, const LinkBudget &budget)
{
    return p_t * signal / (budget.sigma_r_sq * leak + budget.sigma_0_sq);
}
} // namespace

LinkBudget::LinkBudget(double p_t_dbm_, double nf_db_, double n0_dbm_per_hz_, Vector3d rx_position_,
                       double calibration_)
    : p_t_dbm(p_t_dbm_), nf_db(nf_db_), n0_dbm_per_hz(n0_dbm_per_hz_), rx_position(rx_position_),
      calibration(calibration_)
{
    sigma_r_sq = sigma_0_sq = std::pow(10.0, (nf_db + n0_dbm_per_hz) / 10.0);
    validate();
}

Direction<double> LinkBudget::rx_direction() const
{
    const double r = rx_position.norm();
    if (!(r > 0))
        throw InvalidArgument("LinkBudget: receiver at the array centre");
    return {rad2deg(std::atan2(rx_position.y(), rx_position.x())), rad2deg(std::acos(rx_position.z() / r))};
}

void LinkBudget::validate() const
{
    if (!std::isfinite(p_t_mw()) || !(p_t_mw() > 0))
        throw InvalidArgument("LinkBudget: transmit power must be finite");
    if (!std::isfinite(sigma_r_sq) || !std::isfinite(sigma_0_sq) || sigma_r_sq < 0 || !(sigma_0_sq > 0))
        throw InvalidArgument("LinkBudget: noise variances must be finite and positive");
    if (!rx_position.allFinite())
        throw InvalidArgument("LinkBudget: receiver position must be finite");
    if (!(calibration > 0) || !std::isfinite(calibration))
        throw InvalidArgument("LinkBudget: calibration must be positive");
}

double snr_coupled(const VectorXcd &h_ri, const VectorXcd &h_it, const CoupledSystem<double> &system,
                   const LinkBudget &budget)
{
    check_channels(h_ri, h_it, system.size(), "snr_coupled");
    // row vector h_ri^T (Theta^-1 - S_II)^-1
    const VectorXcd g = system.solve_transpose(h_ri);
    return snr(budget.p_t_mw(), std::norm(g.cwiseProduct(h_it).sum()), g.squaredNorm(), budget);
}

double snr_coupled(const VectorXcd &h_ri, const VectorXcd &h_it, const ReflectionState<double> &state,
                   const MatrixXcd &s_ii, const LinkBudget &budget)
{
    return snr_coupled(h_ri, h_it, CoupledSystem<double>(state, s_ii), budget);
}

double snr_uncoupled(const VectorXcd &h_ri, const VectorXcd &h_it, const ReflectionState<double> &state,
                     const LinkBudget &budget)
{
    state.validate();
    check_channels(h_ri, h_it, state.size(), "snr_uncoupled");
    const VectorXcd g = state.effective().cwiseProduct(h_ri);
    return snr(budget.p_t_mw(), std::norm(g.cwiseProduct(h_it).sum()), g.squaredNorm(), budget);
}

double achievable_rate(double gamma)
{
    if (!(gamma >= 0))
        throw InvalidArgument("achievable_rate: SNR must be non-negative");
    return std::log2(1 + gamma);
}

VectorXcd rx_channel(const Scenario &scenario, const LinkBudget &budget)
{
    const double k = scenario.wavenumber();
    const double a = hop_constant(scenario);
    const Positions<double> &p = scenario.array.positions();
    VectorXcd h(p.cols());
    for (Index n = 0; n < p.cols(); ++n)
    {
        const Vector3d v = budget.rx_position - p.col(n);
        const double r = v.norm();
        if (!(r > 0))
            throw InvalidArgument("rx_channel: receiver coincides with an element");
        const double taper = std::pow(std::max(v.z() / r, 0.0), scenario.q_e);
        h(n) = std::polar(a * taper / r, -k * r);
    }
    return h;
}

VectorXcd tx_channel(const Scenario &scenario, const LinkBudget &budget)
{
    return (budget.calibration * hop_constant(scenario)) * channel_in(scenario);
}

std::vector<NamedDesign> prototype_designs(const Scenario &scenario, const UnitCellStates &cells,
                                           const Direction<double> &target)
{
    ReflectionState<double> continuous = continuous_phase_design(scenario, target);
    ReflectionState<double> quantized = quantize_one_bit(continuous, cells);
    return {{"quantized", std::move(quantized)}, {"continuous", std::move(continuous)}};
}

std::vector<RateRow> sweep_amplification(const Scenario &scenario, const std::vector<NamedDesign> &designs,
                                         const CouplingModel<double> &model, const LinkBudget &budget,
                                         const std::vector<double> &p_values, unsigned threads)
{
    budget.validate();
    for (double p : p_values)
        if (!(p >= 1) || !std::isfinite(p))
            throw InvalidArgument("sweep_amplification: amplification values must be >= 1");

    const MatrixXcd s_ii = scattering_matrix(scenario.array, model, scenario.frequency_hz);
    const VectorXcd h_ri = rx_channel(scenario, budget);
    const VectorXcd h_it = tx_channel(scenario, budget);

    std::vector<RateRow> rows(designs.size() * p_values.size());
    parallel_for(
        Index(rows.size()),
        [&](Index i) {
            const NamedDesign &design = designs[std::size_t(i) / p_values.size()];
            const double p = p_values[std::size_t(i) % p_values.size()];
            const ReflectionState<double> state{design.state.theta_diag, p};
            rows[std::size_t(i)] = {design.name, scenario.frequency_hz, p,
                                    achievable_rate(snr_uncoupled(h_ri, h_it, state, budget)),
                                    achievable_rate(snr_coupled(h_ri, h_it, state, s_ii, budget))};
        },
        threads);
    return rows;
}

std::vector<RateRow> sweep_frequency(const std::vector<FrequencyCase> &cases, const CouplingModel<double> &model,
                                     const LinkBudget &budget, unsigned threads)
{
    if (cases.empty())
        throw InvalidArgument("sweep_frequency: no scenarios");
    const RisArray<double> &array = cases.front().scenario.array;
    for (const FrequencyCase &c : cases)
    {
        c.scenario.validate();
        if (c.scenario.array.rows() != array.rows() || c.scenario.array.cols() != array.cols() ||
            c.scenario.array.spacing() != array.spacing())
            throw InvalidArgument("sweep_frequency: scenarios must share one array");
    }
    const Direction<double> target = budget.rx_direction();
    std::vector<RateRow> rows;
    for (const FrequencyCase &c : cases)
    {
        const std::vector<RateRow> part =
            sweep_amplification(c.scenario, prototype_designs(c.scenario, c.cells, target), model, budget, {1.0},
                                threads);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

double calibration_for_rate(const Scenario &scenario, const ReflectionState<double> &state, LinkBudget budget,
                            double target_rate)
{
    if (!(target_rate > 0) || !std::isfinite(target_rate))
        throw InvalidArgument("calibration_for_rate: target rate must be positive");
    budget.calibration = 1;
    const VectorXcd g = state.effective().cwiseProduct(rx_channel(scenario, budget));
    const double signal = budget.p_t_mw() * std::norm(g.cwiseProduct(tx_channel(scenario, budget)).sum());
    if (!(signal > 0))
        throw NumericalError("calibration_for_rate: design carries no signal to the receiver");
    const double noise = budget.sigma_r_sq * g.squaredNorm() + budget.sigma_0_sq;
    return std::sqrt(std::expm1(target_rate * std::numbers::ln2) * noise / signal);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count)
{
    if (!(lo > 0) || !(hi >= lo) || count == 0 || (count == 1 && hi != lo))
        throw InvalidArgument("log_spaced: need 0 < lo <= hi and a positive count");
    std::vector<double> v(count);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = count == 1 ? lo : std::pow(10.0, a + (b - a) * double(i) / double(count - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

void write_rate_csv(std::ostream &out, const std::vector<RateRow> &rows)
{
    out << "design,frequency_hz,p,rate_no_mc_bpshz,rate_mc_bpshz,gap_bpshz\n"
        << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const RateRow &r : rows)
        out << r.design << ',' << r.frequency_hz << ',' << r.p << ',' << r.rate_no_mc << ',' << r.rate_mc << ','
            << r.gap() << '\n';
}

} // namespace rislab
