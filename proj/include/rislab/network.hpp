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
#include "rislab/geometry.hpp"
#include "rislab/quadrature.hpp"
#include "rislab/types.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace rislab
{
// Linear solves whose condition estimate exceeds this are reported as failures.
inline constexpr double kMaxConditionEstimate = 1e8;

// Relative change on quadrature doubling that counts as converged / acceptable.
inline constexpr double kQuadratureTolerance = 1e-3;
inline constexpr double kQuadratureFailure = 1e-2;
inline constexpr int kQuadratureMaxDoublings = 5;

namespace detail
{
template <typename Lu>
void check_conditioning(const Lu &lu, const char *context)
{
    const double rcond = double(lu.rcond());
    if (!(rcond >= 1.0 / kMaxConditionEstimate))
        throw ConditioningError(std::string(context) + ": ill-conditioned system",
                                rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity());
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived> &m, const char *context)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw InvalidArgument(std::string(context) + ": matrix must be square and non-empty");
}
} // namespace detail

// Theta = (Z_load - Z0) / (Z_load + Z0)
template <typename Scalar>
Complex<Scalar> reflection_from_load(Complex<Scalar> z_load, Scalar z0)
{
    const Complex<Scalar> den = z_load + z0;
    if (den == Complex<Scalar>(0))
        throw SingularityError("reflection_from_load: load impedance equals -Z0");
    return (z_load - z0) / den;
}

// S = (Z + Z0 I)^-1 (Z - Z0 I)
template <typename Derived>
MatrixX<typename Derived::Scalar> z_to_s(const Eigen::MatrixBase<Derived> &z,
                                         typename Eigen::NumTraits<typename Derived::Scalar>::Real z0)
{
    using Matrix = MatrixX<typename Derived::Scalar>;
    detail::require_square(z, "z_to_s");
    Matrix plus = z;
    plus.diagonal().array() += z0;
    Matrix minus = z;
    minus.diagonal().array() -= z0;
    Eigen::PartialPivLU<Matrix> lu(plus);
    detail::check_conditioning(lu, "z_to_s");
    return lu.solve(minus);
}

// Z = Z0 (I + S)(I - S)^-1. Both factors are rational functions of S and commute.
template <typename Derived>
MatrixX<typename Derived::Scalar> s_to_z(const Eigen::MatrixBase<Derived> &s,
                                         typename Eigen::NumTraits<typename Derived::Scalar>::Real z0)
{
    using Matrix = MatrixX<typename Derived::Scalar>;
    detail::require_square(s, "s_to_z");
    Matrix plus = s;
    plus.diagonal().array() += 1;
    Matrix minus = -s;
    minus.diagonal().array() += 1;
    Eigen::PartialPivLU<Matrix> lu(minus);
    detail::check_conditioning(lu, "s_to_z");
    return z0 * lu.solve(plus);
}

// Mutual impedance of two parallel side-by-side thin dipoles of length h at
// separation d, with a fixed quadrature rule. k is the free-space wavenumber.
template <typename Scalar>
Complex<Scalar> mutual_impedance_with_rule(Scalar h, Scalar d, Scalar k, const GaussLegendreRule<Scalar> &rule)
{
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Scalar half = h / Scalar(2);
    const Scalar jacobian = half / Scalar(2);
    const Scalar mid_current = Scalar(2) * cos(k * half);

    // The integrand is even in z, so integrate [0, h/2] and double.
    Scalar acc_re = 0, acc_im = 0;
    for (Index i = 0; i < rule.nodes.size(); ++i)
    {
        const Scalar z = jacobian * (rule.nodes(i) + Scalar(1));
        const Scalar r0 = sqrt(d * d + z * z);
        const Scalar r1 = sqrt(d * d + (half - z) * (half - z));
        const Scalar r2 = sqrt(d * d + (half + z) * (half + z));
        // -j e^{-jkr} / r  =  (-sin(kr) - j cos(kr)) / r
        const Scalar ker_re = -sin(k * r1) / r1 - sin(k * r2) / r2 + mid_current * sin(k * r0) / r0;
        const Scalar ker_im = -cos(k * r1) / r1 - cos(k * r2) / r2 + mid_current * cos(k * r0) / r0;
        const Scalar w = rule.weights(i) * sin(k * (half - z));
        acc_re += w * ker_re;
        acc_im += w * ker_im;
    }
    return Scalar(-60) * jacobian * Complex<Scalar>(acc_re, acc_im);
}

// Induced-EMF mutual impedance Z(h, d) in ohms. The rule order starts at
// `quadrature_points` and doubles until successive values agree to 0.1%.
template <typename Scalar>
Complex<Scalar> mutual_impedance(Scalar h, Scalar d, Scalar frequency_hz, Index quadrature_points = 512)
{
    using std::abs;
    if (!(h > 0) || !(d > 0) || !(frequency_hz > 0))
        throw InvalidArgument("mutual_impedance: h, d and frequency must be positive");
    if (quadrature_points < 2)
        throw InvalidArgument("mutual_impedance: need at least 2 quadrature points");

    const Scalar k = wavenumber(frequency_hz);
    Index n = quadrature_points;
    Complex<Scalar> value = mutual_impedance_with_rule(h, d, k, gauss_legendre<Scalar>(n));
    Scalar change = 0;
    for (int doubling = 0; doubling < kQuadratureMaxDoublings; ++doubling)
    {
        n *= 2;
        const Complex<Scalar> refined = mutual_impedance_with_rule(h, d, k, gauss_legendre<Scalar>(n));
        const Scalar scale = abs(refined);
        change = scale > 0 ? abs(refined - value) / scale : abs(refined - value);
        value = refined;
        if (change < Scalar(kQuadratureTolerance))
            return value;
    }
    if (change > Scalar(kQuadratureFailure) || !std::isfinite(abs(value)))
        throw AccuracyError("mutual_impedance: quadrature did not converge (relative change " +
                            std::to_string(double(change)) + ")");
    return value;
}

// Equivalent-dipole coupling parameters.
template <typename Scalar>
struct CouplingModel
{
    Scalar h = 0;   // equivalent dipole length, m
    Scalar d = 0;   // equivalent nearest-neighbour separation, m
    Scalar z0 = 50; // reference impedance, ohm
    Index quadrature_points = 512;
    // Self impedance on the diagonal of Z_II; matched (= z0) when unset.
    std::optional<Complex<Scalar>> self_impedance;

    Complex<Scalar> diagonal() const { return self_impedance.value_or(Complex<Scalar>(z0)); }

    void validate() const
    {
        if (!(h > 0) || !(d > 0) || !(z0 > 0))
            throw InvalidArgument("CouplingModel: h, d and z0 must be positive");
        if (quadrature_points < 64)
            throw InvalidArgument("CouplingModel: quadrature_points must be at least 64");
    }
};

// The two distinct mutual impedances of the 8-neighbour model.
template <typename Scalar>
struct NeighbourImpedances
{
    Complex<Scalar> adjacent; // Z(h, d) at pitch spacing
    Complex<Scalar> diagonal; // Z(h, sqrt(2) d) at sqrt(2) pitch
};

template <typename Scalar>
NeighbourImpedances<Scalar> neighbour_impedances(const CouplingModel<Scalar> &model, Scalar frequency_hz)
{
    model.validate();
    using std::sqrt;
    return {mutual_impedance(model.h, model.d, frequency_hz, model.quadrature_points),
            mutual_impedance(model.h, sqrt(Scalar(2)) * model.d, frequency_hz, model.quadrature_points)};
}

inline constexpr double kNeighbourDistanceTolerance = 1e-9; // m

// Z_II with only adjacent and diagonal neighbours coupled.
template <typename Scalar>
MatrixXc<Scalar> assemble_z_ii(const RisArray<Scalar> &array, const CouplingModel<Scalar> &model, Scalar frequency_hz)
{
    using std::abs;
    using std::sqrt;
    const NeighbourImpedances<Scalar> zn = neighbour_impedances(model, frequency_hz);
    const Index n = array.size();
    const Scalar pitch = array.spacing();
    const Scalar diag_pitch = sqrt(Scalar(2)) * pitch;
    const Scalar tol = Scalar(kNeighbourDistanceTolerance);

    MatrixXc<Scalar> z = MatrixXc<Scalar>::Zero(n, n);
    z.diagonal().setConstant(model.diagonal());
    const Positions<Scalar> &p = array.positions();
    for (Index m = 0; m < n; ++m)
        for (Index k = m + 1; k < n; ++k)
        {
            const Scalar dist = (p.col(m) - p.col(k)).norm();
            if (abs(dist - pitch) <= tol)
                z(m, k) = z(k, m) = zn.adjacent;
            else if (abs(dist - diag_pitch) <= tol)
                z(m, k) = z(k, m) = zn.diagonal;
        }
    return z;
}

template <typename Scalar>
MatrixXc<Scalar> scattering_matrix(const RisArray<Scalar> &array, const CouplingModel<Scalar> &model,
                                   Scalar frequency_hz)
{
    return z_to_s(assemble_z_ii(array, model, frequency_hz), model.z0);
}

// Per-element reflection coefficients of a single-connected surface, with a
// uniform amplification p >= 1 applied on top.
template <typename Scalar>
struct ReflectionState
{
    VectorXc<Scalar> theta_diag;
    Scalar amplification = 1;

    Index size() const { return theta_diag.size(); }
    VectorXc<Scalar> effective() const { return amplification * theta_diag; }

    void validate() const
    {
        if (!(amplification >= Scalar(1)) || !std::isfinite(amplification))
            throw InvalidArgument("ReflectionState: amplification must be >= 1");
        if (!theta_diag.allFinite())
            throw InvalidArgument("ReflectionState: non-finite reflection coefficient");
    }
};

// Factorisation of (Theta^-1 - S_II), shared by every solve against the same
// state and coupling matrix.
template <typename Scalar>
class CoupledSystem
{
  public:
    CoupledSystem(const ReflectionState<Scalar> &state, const MatrixXc<Scalar> &s_ii)
        : theta_(state.effective())
    {
        state.validate();
        detail::require_square(s_ii, "coupled_response");
        if (s_ii.rows() != theta_.size())
            throw InvalidArgument("coupled_response: reflection state and S_II sizes differ");
        if ((theta_.array() == Complex<Scalar>(0)).any())
            throw InvalidArgument("coupled_response: zero reflection coefficient cannot be inverted");

        uncoupled_ = s_ii.isZero(0);
        if (uncoupled_)
            return;
        MatrixXc<Scalar> m = -s_ii;
        m.diagonal() += theta_.cwiseInverse();
        lu_.compute(m);
        detail::check_conditioning(lu_, "coupled_response");
    }

    Index size() const { return theta_.size(); }
    bool uncoupled() const { return uncoupled_; }

    // (Theta^-1 - S_II)^-1 rhs
    VectorXc<Scalar> solve(const VectorXc<Scalar> &rhs) const
    {
        check_rhs(rhs);
        if (uncoupled_)
            return theta_.cwiseProduct(rhs);
        return lu_.solve(rhs);
    }

    // (Theta^-1 - S_II)^-T rhs, i.e. the row vector rhs^T (Theta^-1 - S_II)^-1
    VectorXc<Scalar> solve_transpose(const VectorXc<Scalar> &rhs) const
    {
        check_rhs(rhs);
        if (uncoupled_)
            return theta_.cwiseProduct(rhs);
        return lu_.transpose().solve(rhs);
    }

    MatrixXc<Scalar> response() const
    {
        if (uncoupled_)
            return theta_.asDiagonal();
        return lu_.inverse();
    }

  private:
    void check_rhs(const VectorXc<Scalar> &rhs) const
    {
        if (rhs.size() != theta_.size())
            throw InvalidArgument("CoupledSystem: right-hand side has the wrong size");
    }

    VectorXc<Scalar> theta_;
    bool uncoupled_ = false;
    Eigen::PartialPivLU<MatrixXc<Scalar>> lu_;
};

// (Theta^-1 - S_II)^-1 with Theta = p * diag(theta)
template <typename Scalar>
MatrixXc<Scalar> coupled_response(const ReflectionState<Scalar> &state, const MatrixXc<Scalar> &s_ii)
{
    return CoupledSystem<Scalar>(state, s_ii).response();
}

} // namespace rislab
