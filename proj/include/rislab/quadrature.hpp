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

#include "rislab/types.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace rislab
{
// Gauss-Legendre nodes and weights on [-1, 1].
template <typename Scalar>
struct GaussLegendreRule
{
    VectorX<Scalar> nodes;
    VectorX<Scalar> weights;
};

template <typename Scalar>
GaussLegendreRule<Scalar> compute_gauss_legendre(Index n)
{
    using std::abs;
    using std::cos;
    GaussLegendreRule<Scalar> rule{VectorX<Scalar>(n), VectorX<Scalar>(n)};
    const Scalar eps = Scalar(4) * std::numeric_limits<Scalar>::epsilon();
    for (Index i = 0; i < (n + 1) / 2; ++i)
    {
        // Newton iteration on P_n from the Tricomi initial guess.
        Scalar z = cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
        Scalar dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            Scalar p1 = 1, p2 = 0;
            for (Index j = 1; j <= n; ++j)
            {
                const Scalar p3 = p2;
                p2 = p1;
                p1 = ((Scalar(2 * j - 1)) * z * p2 - Scalar(j - 1) * p3) / Scalar(j);
            }
            dp = Scalar(n) * (z * p1 - p2) / (z * z - Scalar(1));
            const Scalar z_prev = z;
            z = z_prev - p1 / dp;
            if (abs(z - z_prev) <= eps)
                break;
        }
        rule.nodes(i) = -z;
        rule.nodes(n - 1 - i) = z;
        rule.weights(i) = rule.weights(n - 1 - i) = Scalar(2) / ((Scalar(1) - z * z) * dp * dp);
    }
    return rule;
}

// Rules are computed once per order and shared; the returned reference stays valid.
template <typename Scalar>
const GaussLegendreRule<Scalar> &gauss_legendre(Index n)
{
    static std::mutex mutex;
    static std::map<Index, std::unique_ptr<const GaussLegendreRule<Scalar>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto &slot = cache[n];
    if (!slot)
        slot = std::make_unique<const GaussLegendreRule<Scalar>>(compute_gauss_legendre<Scalar>(n));
    return *slot;
}

} // namespace rislab
