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

#include "rislab/coupling_spectrum.hpp"
#include "rislab/network.hpp"
#include "rislab/pattern.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rislab
{
// Scale in which pattern samples are compared.
enum class SampleScale
{
    linear, // |E| / max |E|
    db      // 20 log10(|E| / max |E|), floored at kDbFloor
};

// Encoding of a reference pattern file.
enum class FileScale
{
    linear,
    field_db,
    power_db
};

inline constexpr double kDbFloor = -100.0;

SampleScale parse_sample_scale(std::string_view name);
FileScale parse_file_scale(std::string_view name);
std::string_view to_string(SampleScale scale);
std::string_view to_string(FileScale scale);

// Normalised magnitudes (max 1) expressed in the requested scale.
VectorXd to_scale(const VectorXd &normalized_magnitude, SampleScale scale);

// A pattern sampled from full-wave simulation or measurement together with
// the operating point and beamforming that produced it.
struct ReferencePattern
{
    Scenario scenario;
    ReflectionState<double> theta;
    PatternGrid grid;
    VectorXd samples;
    SampleScale scale = SampleScale::linear;

    void validate() const;
};

// Coupling-aware pattern samples for dipole parameters taken from `model`.
VectorXd stack_samples(const Scenario &scenario, const ReflectionState<double> &theta,
                       const CouplingModel<double> &model, const PatternGrid &grid, SampleScale scale);

// Evaluates the pattern-matching residual for many (h, d) candidates against a
// fixed set of references. The expensive per-reference data (steering
// vectors, incident fields) is prepared once; each candidate then needs only
// the two mutual impedances per frequency and one coupled solve, done in the
// grid eigenbasis of S_II with a dense LU fallback.
class PatternFitter
{
  public:
    PatternFitter(std::vector<ReferencePattern> references, SampleScale scale, CouplingModel<double> base);

    // Sum of squared sample distances. NaN when a candidate is numerically unusable.
    double objective(double h, double d) const;

    VectorXd model_samples(std::size_t reference, double h, double d) const;

    std::size_t reference_count() const { return prepared_.size(); }

  private:
    struct Prepared
    {
        double frequency_hz;
        MatrixXcd steering;
        VectorXcd theta;
        VectorXcd incident;
        VectorXd target;
    };

    VectorXcd reflected_field(const Prepared &ref, double h, double d) const;

    std::vector<ReferencePattern> references_;
    std::vector<Prepared> prepared_;
    SampleScale scale_;
    CouplingModel<double> base_;
    GridCouplingSpectrum<double> spectrum_;
};

double objective(double h, double d, std::span<const ReferencePattern> references, SampleScale scale,
                 const CouplingModel<double> &base = {});

struct SearchBox
{
    double h_min, h_max, d_min, d_max;
    Index steps_h = 100;
    Index steps_d = 100;

    // [lambda/100, lambda] in both parameters.
    static SearchBox wavelength_span(double frequency_hz = 25e9, Index steps = 100);
    void validate() const;
};

struct FitOptions
{
    SampleScale scale = SampleScale::linear;
    bool refine = true;
    CouplingModel<double> model; // z0, quadrature and self impedance; h and d are searched
    unsigned threads = 0;        // 0: RIS_LAB_THREADS or all cores
};

struct FitResult
{
    double h_hat;
    double d_hat;
    double residual;
    double resolution_h; // final grid step actually resolved
    double resolution_d;
    bool refined;
    SearchBox box;
    VectorXd h_values;        // coarse grid
    VectorXd d_values;        // coarse grid
    MatrixXd residual_surface; // rows: h index, cols: d index; NaN where excluded
    Index excluded_points;    // non-finite evaluations, coarse and refined
};

// Exhaustive search over the box, then (optionally) a 10x finer search over
// the 3x3 coarse cells around the coarse minimum. Ties go to the lowest
// (h, d) index.
FitResult fit_grid_search(std::span<const ReferencePattern> references, const SearchBox &box,
                          const FitOptions &options);

// CSV with header theta_el_deg,value. `source` names the stream in errors.
ReferencePattern ingest_reference(std::istream &in, const std::string &source, FileScale file_scale,
                                  SampleScale sample_scale, const Scenario &scenario,
                                  const ReflectionState<double> &theta);

ReferencePattern ingest_reference(const std::filesystem::path &path, FileScale file_scale, SampleScale sample_scale,
                                  const Scenario &scenario, const ReflectionState<double> &theta);

void write_reference_csv(std::ostream &out, const PatternGrid &grid, const VectorXd &values);

void write_surface_csv(std::ostream &out, const FitResult &result);

} // namespace rislab
