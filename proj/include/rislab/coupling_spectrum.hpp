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
#include "rislab/types.hpp"

#include <cmath>
#include <numbers>

namespace rislab
{
// Exact eigen-structure of the 8-neighbour coupling model on a rows x cols grid.
//
// With T_n the adjacency matrix of an n-node path, the neighbour pattern is
// A_adj = T_r (x) I + I (x) T_c and A_diag = T_r (x) T_c. Both are diagonalised
// by the Kronecker product of the orthonormal DST-I bases of T_r and T_c, so
// Z_II = z_self I + Z_adj A_adj + Z_diag A_diag and S_II share that basis and
// S_II is fully described by one complex eigenvalue per grid mode (p, q).
template <typename Scalar>
class GridCouplingSpectrum
{
  public:
    GridCouplingSpectrum(Index rows, Index cols) : rows_(rows), cols_(cols)
    {
        if (rows < 1 || cols < 1)
            throw InvalidArgument("GridCouplingSpectrum: empty grid");
        path_modes(rows, basis_r_, lambda_r_);
        path_modes(cols, basis_c_, lambda_c_);
    }

    explicit GridCouplingSpectrum(const RisArray<Scalar> &array) : GridCouplingSpectrum(array.rows(), array.cols()) {}

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index size() const { return rows_ * cols_; }

    // Eigenvalues of S_II laid out as a rows x cols matrix of modes.
    MatrixXc<Scalar> scattering_modes(Complex<Scalar> adjacent, Complex<Scalar> diagonal, Complex<Scalar> self,
                                      Scalar z0) const
    {
        MatrixXc<Scalar> modes(rows_, cols_);
        for (Index p = 0; p < rows_; ++p)
            for (Index q = 0; q < cols_; ++q)
            {
                const Complex<Scalar> z = self + adjacent * (lambda_r_(p) + lambda_c_(q)) +
                                          diagonal * (lambda_r_(p) * lambda_c_(q));
                modes(p, q) = (z - z0) / (z + z0);
            }
        return modes;
    }

    // y = S x, with x and y in row-major element order.
    template <typename In, typename Out>
    void apply(const MatrixXc<Scalar> &modes, const Eigen::MatrixBase<In> &x, Eigen::MatrixBase<Out> &y) const
    {
        using RowMajor = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        const RowMajor in = Eigen::Map<const RowMajor>(x.derived().data(), rows_, cols_);
        RowMajor spectral = (basis_r_.transpose() * in * basis_c_).cwiseProduct(modes);
        Eigen::Map<RowMajor>(y.derived().data(), rows_, cols_) = basis_r_ * spectral * basis_c_.transpose();
    }

    MatrixXc<Scalar> dense(const MatrixXc<Scalar> &modes) const
    {
        const Index n = size();
        MatrixX<Scalar> q(n, n);
        VectorXc<Scalar> diag(n);
        for (Index r = 0; r < rows_; ++r)
            for (Index c = 0; c < cols_; ++c)
                for (Index p = 0; p < rows_; ++p)
                    for (Index s = 0; s < cols_; ++s)
                        q(r * cols_ + c, p * cols_ + s) = basis_r_(r, p) * basis_c_(c, s);
        for (Index p = 0; p < rows_; ++p)
            for (Index s = 0; s < cols_; ++s)
                diag(p * cols_ + s) = modes(p, s);
        const MatrixXc<Scalar> qc = q.template cast<Complex<Scalar>>();
        return qc * diag.asDiagonal() * qc.transpose();
    }

  private:
    static void path_modes(Index n, MatrixX<Scalar> &basis, VectorX<Scalar> &lambda)
    {
        using std::cos;
        using std::sin;
        using std::sqrt;
        const Scalar pi = std::numbers::pi_v<Scalar>;
        const Scalar norm = sqrt(Scalar(2) / Scalar(n + 1));
        basis.resize(n, n);
        lambda.resize(n);
        for (Index k = 0; k < n; ++k)
        {
            lambda(k) = (2 * (k + 1) == n + 1) ? Scalar(0) : Scalar(2) * cos(pi * Scalar(k + 1) / Scalar(n + 1));
            for (Index i = 0; i < n; ++i)
                basis(i, k) = norm * sin(pi * Scalar((i + 1) * (k + 1)) / Scalar(n + 1));
        }
    }

    Index rows_;
    Index cols_;
    MatrixX<Scalar> basis_r_;
    MatrixX<Scalar> basis_c_;
    VectorX<Scalar> lambda_r_;
    VectorX<Scalar> lambda_c_;
};

} // namespace rislab
