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

#include "rislab/errors.hpp"
#include "rislab/types.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace rislab
{
template <typename Scalar>
struct GmresReport
{
    Index iterations = 0;
    Scalar relative_residual = 0;
    bool converged = false;
};

// Unrestarted GMRES for A x = b with a matrix-free operator
// `apply(const VectorXc&, VectorXc&)`. x holds the initial guess on entry.
template <typename Scalar, typename Operator>
GmresReport<Scalar> gmres(const Operator &apply, const VectorXc<Scalar> &b, VectorXc<Scalar> &x, Scalar tolerance,
                          Index max_iterations)
{
    using C = Complex<Scalar>;
    using std::abs;
    using std::conj;
    using std::sqrt;

    const Index n = b.size();
    GmresReport<Scalar> report;
    const Scalar b_norm = b.norm();
    if (b_norm == Scalar(0))
    {
        x.setZero(n);
        report.converged = true;
        return report;
    }
    if (x.size() != n)
        x.setZero(n);

    VectorXc<Scalar> w(n);
    apply(x, w);
    VectorXc<Scalar> r = b - w;
    Scalar beta = r.norm();
    report.relative_residual = beta / b_norm;
    if (report.relative_residual <= tolerance)
    {
        report.converged = true;
        return report;
    }

    const Index m = std::min(max_iterations, n);
    MatrixXc<Scalar> basis(n, m + 1);
    MatrixXc<Scalar> hess = MatrixXc<Scalar>::Zero(m + 1, m);
    VectorX<Scalar> cs(m);
    VectorXc<Scalar> sn(m);
    VectorXc<Scalar> g = VectorXc<Scalar>::Zero(m + 1);
    basis.col(0) = r / beta;
    g(0) = beta;

    Index k = 0;
    for (; k < m; ++k)
    {
        apply(basis.col(k), w);
        // Modified Gram-Schmidt, two passes.
        for (int pass = 0; pass < 2; ++pass)
            for (Index i = 0; i <= k; ++i)
            {
                const C hik = basis.col(i).dot(w);
                hess(i, k) += hik;
                w -= hik * basis.col(i);
            }
        const Scalar h_next = w.norm();
        hess(k + 1, k) = h_next;

        for (Index i = 0; i < k; ++i)
        {
            const C t = cs(i) * hess(i, k) + sn(i) * hess(i + 1, k);
            hess(i + 1, k) = -conj(sn(i)) * hess(i, k) + cs(i) * hess(i + 1, k);
            hess(i, k) = t;
        }
        const C a = hess(k, k);
        const Scalar rho = sqrt(std::norm(a) + h_next * h_next);
        if (abs(a) == Scalar(0))
        {
            cs(k) = 0;
            sn(k) = 1;
        }
        else
        {
            cs(k) = abs(a) / rho;
            sn(k) = (a / abs(a)) * h_next / rho;
        }
        hess(k, k) = cs(k) * a + sn(k) * h_next;
        hess(k + 1, k) = 0;
        g(k + 1) = -conj(sn(k)) * g(k);
        g(k) = cs(k) * g(k);

        report.relative_residual = abs(g(k + 1)) / b_norm;
        if (report.relative_residual <= tolerance || h_next <= std::numeric_limits<Scalar>::min())
        {
            ++k;
            break;
        }
        basis.col(k + 1) = w / h_next;
    }

    const VectorXc<Scalar> y =
        hess.topLeftCorner(k, k).template triangularView<Eigen::Upper>().solve(g.head(k));
    x += basis.leftCols(k) * y;
    report.iterations = k;

    apply(x, w);
    report.relative_residual = (b - w).norm() / b_norm;
    report.converged = std::isfinite(report.relative_residual) && report.relative_residual <= Scalar(10) * tolerance;
    return report;
}

} // namespace rislab
