// SPDX-License-Identifier: Apache-2.0
//
// coarray-emvs — difference-coarray tensor estimation for bistatic EMVS-MIMO radar
// Copyright (C) 2026 coarray-emvs developers
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

#ifndef COEMVS_ESTIMATOR_HPP
#define COEMVS_ESTIMATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "cp.hpp"
#include "emvs.hpp"
#include "hungarian.hpp"

namespace coemvs {

/// Bidiagonal selection matrices of the beamspace rotation invariance. Row m
/// (m = 0..M̃-2) couples adjacent beams m and m+1 with weights cos(mπ/M̃),
/// cos((m+1)π/M̃) (g1) and the corresponding sines (g2); for any beamspace
/// steering vector â(θ) they satisfy tan(π·sinθ/2)·Γ₁â = Γ₂â.
struct GammaPair {
    RMat g1;
    RMat g2;
};

inline GammaPair build_gamma(Index m_tilde) {
    if (m_tilde < 2) throw parameter_error("virtual array size must be at least 2");
    GammaPair p;
    p.g1 = RMat::Zero(m_tilde - 1, m_tilde);
    p.g2 = RMat::Zero(m_tilde - 1, m_tilde);
    for (Index m = 0; m + 1 < m_tilde; ++m) {
        const double a0 = static_cast<double>(m) * pi / static_cast<double>(m_tilde);
        const double a1 = static_cast<double>(m + 1) * pi / static_cast<double>(m_tilde);
        p.g1(m, m) = std::cos(a0);
        p.g1(m, m + 1) = std::cos(a1);
        p.g2(m, m) = std::sin(a0);
        p.g2(m, m + 1) = std::sin(a1);
    }
    return p;
}

/// Elevation estimates from one beamspace factor matrix, index-aligned with
/// its columns. lambda_imag records the imaginary residue of each rotation
/// eigenvalue (zero in the noise-free model).
struct ElevationEstimates {
    std::vector<double> theta;
    std::vector<double> lambda_imag;
};

/// Recovers the elevations encoded in a factor matrix of row structure
/// â(θ) ⊗ q: least-squares solve of the shifted-beam relation followed by an
/// eigendecomposition whose eigenvalues are tan(π·sinθ_k/2). Each eigenvalue
/// is paired to the factor column dominating its eigenvector, preserving the
/// column alignment of the decomposition.
inline ElevationEstimates estimate_elevations(const CMat& c_factor, Index m_tilde) {
    const Index k = c_factor.cols();
    if (c_factor.rows() != 6 * m_tilde)
        throw parameter_error("factor matrix row count must be 6*M~");
    if (k > 6 * (m_tilde - 1))
        throw identifiability_error("too many columns for the rotation-invariance solve");

    const GammaPair gp = build_gamma(m_tilde);
    const CMat g1 = kronecker(gp.g1.cast<cxd>(), CMat::Identity(6, 6));
    const CMat g2 = kronecker(gp.g2.cast<cxd>(), CMat::Identity(6, 6));

    const CMat a1 = g1 * c_factor;
    const CMat a2 = g2 * c_factor;

    Eigen::CompleteOrthogonalDecomposition<CMat> cod(a1);
    cod.setThreshold(1e-12);
    if (cod.rank() < k)
        throw numeric_error("rotation-invariance system is rank deficient");
    const CMat phi = cod.solve(a2);

    Eigen::ComplexEigenSolver<CMat> ces(phi);
    if (ces.info() != Eigen::Success)
        throw numeric_error("eigendecomposition of the rotation matrix failed");

    // Eigenvector i of the noise-free rotation matrix is a scaled standard
    // basis vector; assign each eigenvalue to the column it dominates.
    RMat score(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index col = 0; col < k; ++col) score(i, col) = std::abs(ces.eigenvectors()(col, i));
    const std::vector<Index> eig_to_col = solve_assignment_max(score);

    ElevationEstimates out;
    out.theta.assign(static_cast<std::size_t>(k), 0.0);
    out.lambda_imag.assign(static_cast<std::size_t>(k), 0.0);
    for (Index i = 0; i < k; ++i) {
        const cxd lambda = ces.eigenvalues()(i);
        const double arg = 2.0 * std::atan(lambda.real()) / pi;
        if (!(arg >= -1.0 && arg <= 1.0))
            throw out_of_range_error("rotation eigenvalue maps outside the elevation domain");
        const Index col = eig_to_col[static_cast<std::size_t>(i)];
        out.theta[static_cast<std::size_t>(col)] = std::asin(arg);
        out.lambda_imag[static_cast<std::size_t>(col)] = lambda.imag();
    }
    return out;
}

/// Collapses a factor matrix of row structure â(θ) ⊗ q back to the EMVS
/// responses: the mean of the M̃ six-row blocks. Exact on the noise-free
/// model because the beamspace rows of â sum to M̃.
inline CMat reconstruct_spatial_response(const CMat& c_factor, Index m_tilde) {
    if (c_factor.rows() != 6 * m_tilde)
        throw parameter_error("factor matrix row count must be 6*M~");
    CMat q = CMat::Zero(6, c_factor.cols());
    for (Index m = 0; m < m_tilde; ++m) q += c_factor.middleRows(6 * m, 6);
    return q / static_cast<double>(m_tilde);
}

struct AngleExtraction {
    double theta = 0.0; // elevation actually used (override or Poynting)
    double phi = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
    double theta_poynting = 0.0;
};

/// Azimuth via the Poynting direction and polarization via the pseudo-inverse
/// of F. The elevation used to build F can be overridden (the pipeline passes
/// the rotation-invariance estimate); the Poynting elevation is always
/// reported as a cross-check. All outputs are invariant under complex scaling
/// of q. The columns of F are orthogonal with squared norm 2, so F† = Fᴴ/2.
inline AngleExtraction extract_angles_and_polarization(
    const Eigen::Matrix<cxd, 6, 1>& q, std::optional<double> theta_override = std::nullopt) {
    const PoyntingAngles pa = poynting_angles(q);

    AngleExtraction out;
    out.theta_poynting = pa.theta;
    out.theta = theta_override.value_or(pa.theta);
    out.phi = pa.phi;

    const Eigen::Matrix<cxd, 6, 2> f = spatial_location_matrix(out.theta, out.phi);
    const Eigen::Matrix<cxd, 2, 1> g = 0.5 * (f.adjoint() * q);
    const double a1 = std::abs(g(0)), a2 = std::abs(g(1));
    if (a1 == 0.0 && a2 == 0.0)
        throw degenerate_response_error("polarization vector vanished");
    out.gamma = std::atan2(a1, a2);
    out.eta = (a1 < 1e-12 * a2) ? 0.0 : std::arg(g(0) * std::conj(g(1)));
    return out;
}

/// One fully paired per-target record (radians). ok=false marks a per-target
/// extraction failure; the remaining records are unaffected.
struct TargetEstimate {
    double theta_t = 0.0, phi_t = 0.0, gamma_t = 0.0, eta_t = 0.0;
    double theta_r = 0.0, phi_r = 0.0, gamma_r = 0.0, eta_r = 0.0;
    double theta_t_poynting = 0.0, theta_r_poynting = 0.0; // diagnostics
    double lambda_imag_t = 0.0, lambda_imag_r = 0.0;       // diagnostics
    bool ok = true;
    std::string error;
};

struct EstimateSet {
    std::vector<TargetEstimate> targets;
};

namespace detail {

inline void require_reportable(double angle, const char* name) {
    if (!(angle >= 0.0 && angle < pi / 2))
        throw out_of_range_error(std::string(name) + " estimate outside [0, pi/2)");
}

} // namespace detail

/// Full per-target parameter extraction from a factor set: elevations from
/// the rotation invariance, azimuth and polarization from the reconstructed
/// EMVS responses. Record k is derived solely from column k of each factor,
/// so transmit and receive parameters stay paired. Out-of-range results are
/// reported as per-record failures rather than folded back.
inline EstimateSet estimate_all(const FactorSet& factors, Index m_tilde, Index n_tilde) {
    const Index k = factors.c_t.cols();
    if (factors.c_r.cols() != k || factors.q_kron.cols() != k)
        throw parameter_error("factor set has inconsistent column counts");
    if (k > 6 * (m_tilde - 1) || k > 6 * (n_tilde - 1))
        throw identifiability_error("target count exceeds the rotation-invariance limit");

    const ElevationEstimates el_t = estimate_elevations(factors.c_t, m_tilde);
    const ElevationEstimates el_r = estimate_elevations(factors.c_r, n_tilde);
    const CMat q_t = reconstruct_spatial_response(factors.c_t, m_tilde);
    const CMat q_r = reconstruct_spatial_response(factors.c_r, n_tilde);

    EstimateSet out;
    out.targets.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        TargetEstimate& rec = out.targets[static_cast<std::size_t>(i)];
        rec.lambda_imag_t = el_t.lambda_imag[static_cast<std::size_t>(i)];
        rec.lambda_imag_r = el_r.lambda_imag[static_cast<std::size_t>(i)];
        try {
            rec.theta_t = el_t.theta[static_cast<std::size_t>(i)];
            rec.theta_r = el_r.theta[static_cast<std::size_t>(i)];
            detail::require_reportable(rec.theta_t, "transmit elevation");
            detail::require_reportable(rec.theta_r, "receive elevation");

            const AngleExtraction tx =
                extract_angles_and_polarization(q_t.col(i), rec.theta_t);
            rec.phi_t = tx.phi;
            rec.gamma_t = tx.gamma;
            rec.eta_t = tx.eta;
            rec.theta_t_poynting = tx.theta_poynting;

            const AngleExtraction rx =
                extract_angles_and_polarization(q_r.col(i), rec.theta_r);
            rec.phi_r = rx.phi;
            rec.gamma_r = rx.gamma;
            rec.eta_r = rx.eta;
            rec.theta_r_poynting = rx.theta_poynting;

            detail::require_reportable(rec.phi_t, "transmit azimuth");
            detail::require_reportable(rec.gamma_t, "transmit polarization angle");
            detail::require_reportable(rec.eta_t, "transmit polarization phase");
            detail::require_reportable(rec.phi_r, "receive azimuth");
            detail::require_reportable(rec.gamma_r, "receive polarization angle");
            detail::require_reportable(rec.eta_r, "receive polarization phase");
        } catch (const error& e) {
            rec.ok = false;
            rec.error = e.category() + ": " + e.what();
        }
    }
    return out;
}

} // namespace coemvs

#endif // COEMVS_ESTIMATOR_HPP
