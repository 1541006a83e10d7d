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

#ifndef COEMVS_CRB_HPP
#define COEMVS_CRB_HPP

#include <array>
#include <vector>

#include "common.hpp"
#include "emvs.hpp"

namespace coemvs {

/// The eight per-target parameter families, in the order the CRB rows/columns
/// are laid out: parameter index = family·K + target.
enum class ParamFamily : int {
    theta_t = 0,
    phi_t = 1,
    gamma_t = 2,
    eta_t = 3,
    theta_r = 4,
    phi_r = 5,
    gamma_r = 6,
    eta_r = 7,
};

inline constexpr std::array<const char*, 8> param_family_names = {
    "theta_t", "phi_t", "gamma_t", "eta_t", "theta_r", "phi_r", "gamma_r", "eta_r"};

/// Deterministic Cramer-Rao bound for the physical (non-coarray) bistatic
/// model. The bound is on the plain array manifold; the coarray estimator is
/// not expected to attain it in underdetermined regimes.
struct CrbResult {
    RMat matrix;        // 8K × 8K, ordered family-major (see ParamFamily)
    double sigma2 = 0.0;
    Index snapshots = 0;
};

namespace detail {

inline TargetParams perturbed(const TargetParams& t, ParamFamily f, double step) {
    TargetParams p = t;
    switch (f) {
        case ParamFamily::theta_t: p.theta_t += step; break;
        case ParamFamily::phi_t: p.phi_t += step; break;
        case ParamFamily::gamma_t: p.gamma_t += step; break;
        case ParamFamily::eta_t: p.eta_t += step; break;
        case ParamFamily::theta_r: p.theta_r += step; break;
        case ParamFamily::phi_r: p.phi_r += step; break;
        case ParamFamily::gamma_r: p.gamma_r += step; break;
        case ParamFamily::eta_r: p.eta_r += step; break;
    }
    return p;
}

} // namespace detail

inline constexpr double crb_fd_step = 1e-6; // radians, central differences

/// 36MN × 8K matrix of manifold derivatives; column f·K + k is the central
/// finite difference of target k's manifold column along family f.
inline CMat manifold_derivatives(const SceneConfig& scene, double step = crb_fd_step) {
    validate_scene(scene);
    const Index k = scene.k();
    CMat d(scene.channels(), 8 * k);
    for (int f = 0; f < 8; ++f) {
        for (Index t = 0; t < k; ++t) {
            const TargetParams& base = scene.targets[static_cast<std::size_t>(t)];
            const CVec plus = target_manifold_column(
                scene, detail::perturbed(base, static_cast<ParamFamily>(f), step));
            const CVec minus = target_manifold_column(
                scene, detail::perturbed(base, static_cast<ParamFamily>(f), -step));
            d.col(static_cast<Index>(f) * k + t) = (plus - minus) / (2.0 * step);
        }
    }
    return d;
}

/// Evaluates the deterministic CRB:
/// (σ²/2L)·[Re((Dᴴ Π⊥ D) ∘ W)]⁻¹ with Π⊥ the orthogonal projector onto the
/// complement of the joint manifold span and W the source-power weighting
/// replicated across the eight families of each target.
inline CrbResult crb_matrix(const SceneConfig& scene) {
    validate_scene(scene);
    const Index k = scene.k();
    for (const TargetParams& t : scene.targets)
        for (double a :
             {t.theta_t, t.phi_t, t.gamma_t, t.eta_t, t.theta_r, t.phi_r, t.gamma_r, t.eta_r})
            if (!(a > 10 * crb_fd_step && a < pi / 2 - 10 * crb_fd_step))
                throw parameter_error("CRB requires angles strictly inside (0, pi/2)");
    if (8 * k > scene.channels() - k)
        throw parameter_error("too many parameters for a nontrivial projector");
    if (!scene.snr_db) throw parameter_error("CRB requires a finite SNR");

    const CMat c = scene_manifold(scene);
    const double sigma2 = noise_variance(scene, c);
    const CMat d = manifold_derivatives(scene);

    // Dᴴ Π⊥ D without materializing the 36MN × 36MN projector.
    const CMat chc = c.adjoint() * c;
    const CMat chd = c.adjoint() * d;
    const CMat m = d.adjoint() * d - chd.adjoint() * chc.ldlt().solve(chd);

    RMat weight(8 * k, 8 * k);
    for (Index fa = 0; fa < 8; ++fa)
        for (Index fb = 0; fb < 8; ++fb)
            for (Index ta = 0; ta < k; ++ta)
                for (Index tb = 0; tb < k; ++tb)
                    weight(fa * k + ta, fb * k + tb) =
                        (ta == tb) ? scene.targets[static_cast<std::size_t>(ta)].power : 0.0;

    const RMat fisher_core = m.real().cwiseProduct(weight);

    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (fisher_core + fisher_core.transpose()));
    if (es.info() != Eigen::Success) throw numeric_error("Fisher eigendecomposition failed");
    const RVec& ev = es.eigenvalues();
    const double emax = ev(ev.size() - 1);
    std::vector<Index> null_dirs;
    for (Index i = 0; i < ev.size(); ++i)
        if (ev(i) < emax * 1e-12) null_dirs.push_back(i);
    if (!null_dirs.empty())
        throw numeric_error("Fisher matrix is rank deficient along " +
                            std::to_string(null_dirs.size()) + " direction(s)");

    CrbResult out;
    out.sigma2 = sigma2;
    out.snapshots = scene.snapshots;
    const RVec inv = ev.cwiseInverse();
    out.matrix.noalias() = sigma2 / (2.0 * static_cast<double>(scene.snapshots)) *
                           (es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose());
    return out;
}

} // namespace coemvs

#endif // COEMVS_CRB_HPP
