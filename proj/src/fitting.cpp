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

#include "rislab/fitting.hpp"

#include "rislab/errors.hpp"
#include "rislab/krylov.hpp"
#include "rislab/parallel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace rislab
{
namespace
{
constexpr double kSolverTolerance = 1e-12;
constexpr Index kSolverMaxIterations = 200;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CouplingModel<double> with_parameters(CouplingModel<double> model, double h, double d)
{
    model.h = h;
    model.d = d;
    return model;
}

VectorXd linspace(double lo, double hi, Index count)
{
    VectorXd v(count);
    for (Index i = 0; i < count; ++i)
        v(i) = lo + (hi - lo) * double(i) / double(count - 1);
    v(count - 1) = hi;
    return v;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string &text, double &value)
{
    const char *begin = text.data();
    const char *end = begin + text.size();
    if (begin != end && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end;
}
} // namespace

SampleScale parse_sample_scale(std::string_view name)
{
    if (name == "linear")
        return SampleScale::linear;
    if (name == "db")
        return SampleScale::db;
    throw InvalidArgument("unknown sample scale '" + std::string(name) + "' (expected linear or db)");
}

FileScale parse_file_scale(std::string_view name)
{
    if (name == "linear")
        return FileScale::linear;
    if (name == "field-db")
        return FileScale::field_db;
    if (name == "power-db")
        return FileScale::power_db;
    throw InvalidArgument("unknown file scale '" + std::string(name) + "' (expected linear, field-db or power-db)");
}

std::string_view to_string(SampleScale scale) { return scale == SampleScale::linear ? "linear" : "db"; }

std::string_view to_string(FileScale scale)
{
    switch (scale)
    {
    case FileScale::linear:
        return "linear";
    case FileScale::field_db:
        return "field-db";
    case FileScale::power_db:
        return "power-db";
    }
    return "linear";
}

VectorXd to_scale(const VectorXd &normalized_magnitude, SampleScale scale)
{
    if (scale == SampleScale::linear)
        return normalized_magnitude;
    VectorXd db(normalized_magnitude.size());
    for (Index i = 0; i < db.size(); ++i)
    {
        const double m = normalized_magnitude(i);
        db(i) = m > 0 ? std::max(20.0 * std::log10(m), kDbFloor) : kDbFloor;
    }
    return db;
}

void ReferencePattern::validate() const
{
    if (samples.size() != grid.size())
        throw InvalidArgument("ReferencePattern: sample count does not match its grid");
    if (theta.size() != scenario.array.size())
        throw InvalidArgument("ReferencePattern: beamforming state does not match the array");
    if (!samples.allFinite())
        throw InvalidArgument("ReferencePattern: non-finite samples");
}

VectorXd stack_samples(const Scenario &scenario, const ReflectionState<double> &theta,
                       const CouplingModel<double> &model, const PatternGrid &grid, SampleScale scale)
{
    const MatrixXcd s_ii = scattering_matrix(scenario.array, model, scenario.frequency_hz);
    return to_scale(pattern_coupled(scenario, theta, s_ii, grid).normalized_magnitude(), scale);
}

PatternFitter::PatternFitter(std::vector<ReferencePattern> references, SampleScale scale, CouplingModel<double> base)
    : references_(std::move(references)), scale_(scale), base_(std::move(base)),
      spectrum_(references_.empty() ? GridCouplingSpectrum<double>(1, 1)
                                    : GridCouplingSpectrum<double>(references_.front().scenario.array))
{
    if (references_.empty())
        throw InvalidArgument("PatternFitter: at least one reference pattern is required");
    for (const ReferencePattern &ref : references_)
    {
        ref.validate();
        ref.theta.validate();
        if (ref.scale != scale_)
            throw InvalidArgument("PatternFitter: reference stored in " + std::string(to_string(ref.scale)) +
                                  " scale, fit runs in " + std::string(to_string(scale_)));
        if (ref.scenario.array.rows() != spectrum_.rows() || ref.scenario.array.cols() != spectrum_.cols() ||
            ref.scenario.array.spacing() != references_.front().scenario.array.spacing())
            throw InvalidArgument("PatternFitter: all references must share one array");
        const VectorXcd theta = ref.theta.effective();
        if ((theta.array() == Complex<double>(0)).any())
            throw InvalidArgument("PatternFitter: zero reflection coefficient in a reference design");
        prepared_.push_back({ref.scenario.frequency_hz, steering_matrix(ref.scenario, ref.grid), theta,
                             channel_in(ref.scenario), ref.samples});
    }
}

VectorXcd PatternFitter::reflected_field(const Prepared &ref, double h, double d) const
{
    const CouplingModel<double> model = with_parameters(base_, h, d);
    const NeighbourImpedances<double> zn = neighbour_impedances(model, ref.frequency_hz);
    const MatrixXcd modes = spectrum_.scattering_modes(zn.adjacent, zn.diagonal, model.diagonal(), model.z0);

    // (Theta^-1 - S) x = h_in  <=>  (I - Theta S) x = Theta h_in
    const VectorXcd rhs = ref.theta.cwiseProduct(ref.incident);
    VectorXcd scratch(rhs.size());
    auto op = [&](const auto &x, VectorXcd &y) {
        spectrum_.apply(modes, x, scratch);
        y = x - ref.theta.cwiseProduct(scratch);
    };
    VectorXcd x = rhs;
    const GmresReport<double> report = gmres<double>(op, rhs, x, kSolverTolerance, kSolverMaxIterations);
    if (report.converged)
        return x;

    const ReflectionState<double> state{ref.theta, 1.0};
    return CoupledSystem<double>(state, spectrum_.dense(modes)).solve(ref.incident);
}

VectorXd PatternFitter::model_samples(std::size_t reference, double h, double d) const
{
    const Prepared &ref = prepared_.at(reference);
    const VectorXcd field = ref.steering * reflected_field(ref, h, d);
    const VectorXd mag = field.cwiseAbs();
    const double peak = mag.maxCoeff();
    if (!(peak > 0) || !std::isfinite(peak))
        throw DegeneratePattern("PatternFitter: model pattern is degenerate");
    return to_scale(mag / peak, scale_);
}

double PatternFitter::objective(double h, double d) const
{
    double total = 0;
    try
    {
        for (std::size_t g = 0; g < prepared_.size(); ++g)
            total += (model_samples(g, h, d) - prepared_[g].target).squaredNorm();
    }
    catch (const NumericalError &)
    {
        return kNaN;
    }
    return std::isfinite(total) ? total : kNaN;
}

double objective(double h, double d, std::span<const ReferencePattern> references, SampleScale scale,
                 const CouplingModel<double> &base)
{
    if (references.empty())
        throw InvalidArgument("objective: at least one reference pattern is required");
    const CouplingModel<double> model = with_parameters(base, h, d);
    model.validate();
    double total = 0;
    for (const ReferencePattern &ref : references)
    {
        ref.validate();
        if (ref.scale != scale)
            throw InvalidArgument("objective: reference scale differs from the comparison scale");
        total += (stack_samples(ref.scenario, ref.theta, model, ref.grid, scale) - ref.samples).squaredNorm();
    }
    return total;
}

SearchBox SearchBox::wavelength_span(double frequency_hz, Index steps)
{
    const double lambda = wavelength(frequency_hz);
    return {lambda / 100, lambda, lambda / 100, lambda, steps, steps};
}

void SearchBox::validate() const
{
    if (!(h_min > 0) || !(d_min > 0) || !(h_max > h_min) || !(d_max > d_min))
        throw InvalidArgument("SearchBox: bounds must be positive with max > min");
    if (steps_h < 2 || steps_d < 2)
        throw InvalidArgument("SearchBox: at least two steps per axis");
}

namespace
{
struct GridMinimum
{
    Index i = -1;
    Index j = -1;
    double value = std::numeric_limits<double>::infinity();
};

MatrixXd evaluate_grid(const PatternFitter &fitter, const VectorXd &hs, const VectorXd &ds, unsigned threads)
{
    MatrixXd surface(hs.size(), ds.size());
    parallel_for(
        hs.size() * ds.size(),
        [&](Index k) {
            const Index i = k / ds.size();
            const Index j = k % ds.size();
            surface(i, j) = fitter.objective(hs(i), ds(j));
        },
        threads);
    return surface;
}

GridMinimum argmin(const MatrixXd &surface, Index &excluded)
{
    GridMinimum best;
    for (Index i = 0; i < surface.rows(); ++i)
        for (Index j = 0; j < surface.cols(); ++j)
        {
            const double v = surface(i, j);
            if (!std::isfinite(v))
            {
                ++excluded;
                continue;
            }
            if (v < best.value)
                best = {i, j, v};
        }
    return best;
}

VectorXd refined_axis(const VectorXd &coarse, Index centre, double step)
{
    const Index lo = std::max<Index>(centre - 1, 0);
    const Index hi = std::min<Index>(centre + 1, coarse.size() - 1);
    const Index count = Index(std::llround((coarse(hi) - coarse(lo)) / step)) + 1;
    return linspace(coarse(lo), coarse(hi), count);
}
} // namespace

FitResult fit_grid_search(std::span<const ReferencePattern> references, const SearchBox &box,
                          const FitOptions &options)
{
    box.validate();
    if (references.empty())
        throw InvalidArgument("fit_grid_search: at least one reference pattern is required");
    const PatternFitter fitter(std::vector<ReferencePattern>(references.begin(), references.end()), options.scale,
                               options.model);

    FitResult result;
    result.box = box;
    result.h_values = linspace(box.h_min, box.h_max, box.steps_h);
    result.d_values = linspace(box.d_min, box.d_max, box.steps_d);
    result.residual_surface = evaluate_grid(fitter, result.h_values, result.d_values, options.threads);
    result.excluded_points = 0;

    const GridMinimum coarse = argmin(result.residual_surface, result.excluded_points);
    if (coarse.i < 0)
        throw NumericalError("fit_grid_search: objective is non-finite everywhere in the search box");

    const double dh = (box.h_max - box.h_min) / double(box.steps_h - 1);
    const double dd = (box.d_max - box.d_min) / double(box.steps_d - 1);
    result.h_hat = result.h_values(coarse.i);
    result.d_hat = result.d_values(coarse.j);
    result.residual = coarse.value;
    result.resolution_h = dh;
    result.resolution_d = dd;
    result.refined = false;

    if (options.refine)
    {
        const VectorXd hs = refined_axis(result.h_values, coarse.i, dh / 10);
        const VectorXd ds = refined_axis(result.d_values, coarse.j, dd / 10);
        const MatrixXd fine = evaluate_grid(fitter, hs, ds, options.threads);
        const GridMinimum best = argmin(fine, result.excluded_points);
        if (best.i >= 0 && best.value < result.residual)
        {
            result.h_hat = hs(best.i);
            result.d_hat = ds(best.j);
            result.residual = best.value;
        }
        result.resolution_h = dh / 10;
        result.resolution_d = dd / 10;
        result.refined = true;
    }
    return result;
}

ReferencePattern ingest_reference(std::istream &in, const std::string &source, FileScale file_scale,
                                  SampleScale sample_scale, const Scenario &scenario,
                                  const ReflectionState<double> &theta)
{
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<double> elevations;
    std::vector<double> values;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty())
            continue;
        if (!header_seen)
        {
            if (text != "theta_el_deg,value")
                throw ParseError(source, line_no, "expected header 'theta_el_deg,value'");
            header_seen = true;
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
            throw ParseError(source, line_no, "expected two comma-separated fields");
        double el = 0, v = 0;
        if (!parse_double(trim(std::string_view(text).substr(0, comma)), el) || !std::isfinite(el))
            throw ParseError(source, line_no, "elevation is not a finite number");
        if (!parse_double(trim(std::string_view(text).substr(comma + 1)), v) || std::isnan(v))
            throw ParseError(source, line_no, "value is not a number");
        if (!elevations.empty() && !(el > elevations.back()))
            throw InvalidData(source + ":" + std::to_string(line_no) + ": elevation grid is not strictly increasing");
        elevations.push_back(el);
        values.push_back(v);
    }
    if (!header_seen)
        throw ParseError(source, line_no, "empty reference file");
    if (values.size() < 2)
        throw InvalidData(source + ": need at least two samples");

    VectorXd magnitude(Index(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        const double v = values[i];
        double m = 0;
        switch (file_scale)
        {
        case FileScale::linear:
            if (!(v >= 0) || !std::isfinite(v))
                throw InvalidData(source + ": linear samples must be finite and non-negative");
            m = v;
            break;
        case FileScale::field_db:
            if (v == std::numeric_limits<double>::infinity())
                throw InvalidData(source + ": +inf dB sample");
            m = std::pow(10.0, v / 20.0);
            break;
        case FileScale::power_db:
            if (v == std::numeric_limits<double>::infinity())
                throw InvalidData(source + ": +inf dB sample");
            m = std::pow(10.0, (v / 2.0) / 20.0);
            break;
        }
        magnitude(Index(i)) = m;
    }
    const double peak = magnitude.maxCoeff();
    if (!(peak > 0) || magnitude.minCoeff() == peak)
        throw DegenerateData(source + ": all samples are equal, nothing to fit");

    std::optional<PatternGrid> grid;
    try
    {
        grid.emplace(std::move(elevations), 90.0);
    }
    catch (const InvalidArgument &e)
    {
        throw InvalidData(source + ": " + e.what());
    }
    ReferencePattern ref{scenario, theta, std::move(*grid), to_scale(magnitude / peak, sample_scale), sample_scale};
    ref.validate();
    return ref;
}

ReferencePattern ingest_reference(const std::filesystem::path &path, FileScale file_scale, SampleScale sample_scale,
                                  const Scenario &scenario, const ReflectionState<double> &theta)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path.string() + ": cannot open reference file");
    return ingest_reference(in, path.string(), file_scale, sample_scale, scenario, theta);
}

void write_reference_csv(std::ostream &out, const PatternGrid &grid, const VectorXd &values)
{
    if (values.size() != grid.size())
        throw InvalidArgument("write_reference_csv: value count does not match the grid");
    out << "theta_el_deg,value\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Index l = 0; l < grid.size(); ++l)
        out << grid.elevations_deg()[std::size_t(l)] << ',' << values(l) << '\n';
}

void write_surface_csv(std::ostream &out, const FitResult &result)
{
    // First row: d values; first column: h values.
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << "h_m\\d_m";
    for (Index j = 0; j < result.d_values.size(); ++j)
        out << ',' << result.d_values(j);
    out << '\n';
    for (Index i = 0; i < result.h_values.size(); ++i)
    {
        out << result.h_values(i);
        for (Index j = 0; j < result.d_values.size(); ++j)
            out << ',' << result.residual_surface(i, j);
        out << '\n';
    }
}

} // namespace rislab
