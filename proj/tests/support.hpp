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

#include "rislab/config.hpp"
#include "rislab/types.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#ifndef RISLAB_TEST_DATA_DIR
#define RISLAB_TEST_DATA_DIR "data"
#endif

namespace rislab::test
{
inline std::filesystem::path preset_path(const std::string &name)
{
    return std::filesystem::path(RISLAB_TEST_DATA_DIR) / "presets" / (name + ".json");
}

inline ScenarioConfig preset(const std::string &name) { return load_config(preset_path(name)); }

inline double rel_diff(Complex<double> a, Complex<double> b) { return std::abs(a - b) / std::abs(b); }

template <typename A, typename B>
double rel_frobenius(const A &a, const B &b)
{
    return (a - b).norm() / b.norm();
}

inline VectorXcd random_vector(std::mt19937_64 &rng, Index n, double scale = 1)
{
    std::normal_distribution<double> g(0, scale);
    VectorXcd v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = {g(rng), g(rng)};
    return v;
}

inline MatrixXcd random_matrix(std::mt19937_64 &rng, Index rows, Index cols, double scale = 1)
{
    std::normal_distribution<double> g(0, scale);
    MatrixXcd m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = {g(rng), g(rng)};
    return m;
}

// Unit-modulus-ish diagonal with random phase, magnitude in [lo, hi].
inline VectorXcd random_reflections(std::mt19937_64 &rng, Index n, double lo = 0.5, double hi = 1.0)
{
    std::uniform_real_distribution<double> mag(lo, hi), ph(-std::numbers::pi, std::numbers::pi);
    VectorXcd v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = std::polar(mag(rng), ph(rng));
    return v;
}

// Trapezoid rule over the full symmetric interval [-h/2, h/2] of the
// induced-EMF kernel, written out directly in complex arithmetic.
inline Complex<double> trapezoid_mutual_impedance(double h, double d, double f, long intervals = 1000000)
{
    using C = std::complex<double>;
    const C j(0, 1);
    const double k = 2 * std::numbers::pi * f / 299792458.0;
    const double a = h / 2;
    auto integrand = [&](double z) {
        const double r0 = std::sqrt(d * d + z * z);
        const double r1 = std::sqrt(d * d + (z - a) * (z - a));
        const double r2 = std::sqrt(d * d + (z + a) * (z + a));
        const C bracket = -j * std::exp(-j * k * r1) / r1 - j * std::exp(-j * k * r2) / r2 +
                          2.0 * j * std::cos(k * a) * std::exp(-j * k * r0) / r0;
        return -30.0 * std::sin(k * (a - std::abs(z))) * bracket;
    };
    const double step = h / double(intervals);
    C sum = 0.5 * (integrand(-a) + integrand(a));
    for (long i = 1; i < intervals; ++i)
        sum += integrand(-a + step * double(i));
    return sum * step;
}

} // namespace rislab::test
