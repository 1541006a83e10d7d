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

#ifndef COEMVS_PIPELINE_HPP
#define COEMVS_PIPELINE_HPP

#include <vector>

#include "common.hpp"
#include "emvs.hpp"
#include "geometry.hpp"
#include "tensor.hpp"

namespace coemvs {

/// DFT beamspace transform. Rows are mutually orthogonal beams of squared
/// norm M̃; applied to a contiguous centro-symmetric steering vector the
/// result is real (a sampled Dirichlet kernel).
struct BeamspaceMatrix {
    CMat w;
};

/// Final three-way tensor of the pipeline, shape (6M̃, 6Ñ, 36).
struct PipelineOutput {
    DenseTensor r5;
    Index m_tilde = 0;
    Index n_tilde = 0;
};

/// Reshapes the 36MN × L snapshot matrix into the five-way tensor
/// (M, 6, N, 6, L) matching the Khatri-Rao nesting of the signal model.
inline DenseTensor snapshot_tensor(const SnapshotMatrix& y, Index m, Index n) {
    if (y.y.rows() != 36 * m * n)
        throw parameter_error("snapshot matrix row count must be 36*M*N");
    DenseTensor t({m, 6, n, 6, y.y.cols()});
    t.as_matrix(36 * m * n, y.y.cols()) = y.y;
    return t;
}

/// Sample covariance of the five-way snapshot tensor as an eight-way tensor
/// (M, 6, N, 6, M, 6, N, 6): the snapshot average of (slice_l) ∘ (slice_l)*.
/// No noise-floor subtraction is performed.
inline DenseTensor covariance_tensor(const DenseTensor& y5) {
    if (y5.order() != 5) throw parameter_error("covariance_tensor expects a 5-way tensor");
    const Index m = y5.dim(0), n = y5.dim(2), l = y5.dim(4);
    const Index ch = 36 * m * n;
    Eigen::Map<const CMatRM> yv(y5.data(), ch, l);

    DenseTensor r8({m, 6, n, 6, m, 6, n, 6});
    Eigen::Map<CMatRM> r(r8.data(), ch, ch);
    r.setZero();
    r.selfadjointView<Eigen::Lower>().rankUpdate(yv, 1.0 / static_cast<double>(l));
    r.triangularView<Eigen::StrictlyUpper>() = r.adjoint();
    return r8;
}

/// Ensemble covariance of the scene as the same eight-way tensor:
/// Σ_k σ²_k c_k c_k^H + σ²_n I with c_k the joint manifold columns. This is
/// the infinite-snapshot limit of covariance_tensor and drives the noise-free
/// processing path.
inline DenseTensor exact_model_covariance(const SceneConfig& scene) {
    validate_scene(scene);
    const Index m = scene.transmit.count(), n = scene.receive.count();
    const CMat c = scene_manifold(scene);
    const double nv = noise_variance(scene, c);

    RVec powers(scene.k());
    for (Index k = 0; k < scene.k(); ++k)
        powers(k) = scene.targets[static_cast<std::size_t>(k)].power;

    DenseTensor r8({m, 6, n, 6, m, 6, n, 6});
    Eigen::Map<CMatRM> r(r8.data(), c.rows(), c.rows());
    r.noalias() = c * powers.asDiagonal() * c.adjoint();
    if (nv > 0.0) r.diagonal().array() += nv;
    return r8;
}

/// Reorders the covariance modes so each steering vector sits next to its
/// conjugate, then merges those pairs: output shape (M², 6, N², 6, 36). On an
/// ensemble covariance the merged modes carry the coarray phase vectors
/// a ⊗ a* and the 36-dimensional conjugate response pair q_t* ⊗ q_r*.
inline DenseTensor rearrange_and_group(const DenseTensor& r8) {
    if (r8.order() != 8) throw parameter_error("rearrange_and_group expects an 8-way tensor");
    if (r8.dim(0) != r8.dim(4) || r8.dim(2) != r8.dim(6))
        throw parameter_error("covariance tensor modes are inconsistent");
    for (Index n : {Index(1), Index(3), Index(5), Index(7)})
        if (r8.dim(n) != 6) throw parameter_error("EMVS component modes must have extent 6");

    const DenseTensor moved = permute_modes(r8, {0, 4, 1, 2, 6, 3, 5, 7});
    return group_modes(moved, {{0, 1}, {2}, {3, 4}, {5}, {6, 7}});
}

namespace detail {

// Sparse application of a selection matrix along one mode. Each row of the
// selection matrix has only a handful of nonzeros, so a gather-accumulate
// beats a dense product by the fill ratio.
inline DenseTensor selection_mode_product(const DenseTensor& x, const RMat& sel, Index n) {
    if (sel.cols() != x.dim(n))
        throw parameter_error("selection matrix column count does not match tensor mode");
    Index left = 1, right = 1;
    for (Index m = 0; m < n; ++m) left *= x.dim(m);
    for (Index m = n + 1; m < x.order(); ++m) right *= x.dim(m);

    struct Entry {
        Index row, col;
        double value;
    };
    std::vector<Entry> entries;
    for (Index r = 0; r < sel.rows(); ++r)
        for (Index c = 0; c < sel.cols(); ++c)
            if (sel(r, c) != 0.0) entries.push_back({r, c, sel(r, c)});

    std::vector<Index> out_shape = x.shape();
    out_shape[static_cast<std::size_t>(n)] = sel.rows();
    DenseTensor out(std::move(out_shape));

    const Index in_block = x.dim(n) * right;
    const Index out_block = sel.rows() * right;
    for (Index l = 0; l < left; ++l) {
        const cxd* src = x.data() + l * in_block;
        cxd* dst = out.data() + l * out_block;
        for (const Entry& e : entries) {
            Eigen::Map<CVec> drow(dst + e.row * right, right);
            Eigen::Map<const CVec> srow(src + e.col * right, right);
            drow += e.value * srow;
        }
    }
    return out;
}

} // namespace detail

/// Removes the duplicated coarray entries: modes 1 and 3 (the a ⊗ a* pair
/// grids) are averaged onto the contiguous virtual ULAs through the transmit
/// and receive selection matrices. Output shape (M̃, 6, Ñ, 6, 36).
inline DenseTensor apply_coarray_selection(const DenseTensor& r2, const RMat& j_t,
                                           const RMat& j_r) {
    if (r2.order() != 5) throw parameter_error("apply_coarray_selection expects a 5-way tensor");
    DenseTensor out = detail::selection_mode_product(r2, j_t, 0);
    out = detail::selection_mode_product(out, j_r, 2);
    return out;
}

/// DFT beamspace matrix for an odd-sized virtual ULA. Row m (the beam at
/// spatial frequency 2m/M̃) has entry e^{-j2π·p·m/M̃} at the column of lag
/// p ∈ {-(M̃-1)/2, ..., (M̃-1)/2}.
inline BeamspaceMatrix dft_beamspace(Index m_tilde) {
    if (m_tilde < 1 || m_tilde % 2 == 0)
        throw parameter_error("virtual ULA size must be odd and positive");
    const Index h = (m_tilde - 1) / 2;
    BeamspaceMatrix b;
    b.w.resize(m_tilde, m_tilde);
    for (Index m = 0; m < m_tilde; ++m)
        for (Index col = 0; col < m_tilde; ++col) {
            const double p = static_cast<double>(col - h);
            b.w(m, col) = std::exp(-j1c * 2.0 * pi * p * static_cast<double>(m) /
                                   static_cast<double>(m_tilde));
        }
    return b;
}

/// Transforms both virtual-ULA modes into DFT beamspace, turning the steering
/// factors real-valued.
inline DenseTensor to_real_beamspace(const DenseTensor& r3, const BeamspaceMatrix& w_t,
                                     const BeamspaceMatrix& w_r) {
    if (r3.order() != 5) throw parameter_error("to_real_beamspace expects a 5-way tensor");
    DenseTensor out = mode_n_product(r3, w_t.w, 0);
    out = mode_n_product(out, w_r.w, 2);
    return out;
}

/// Merges beam and EMVS-component modes into the final three-way tensor of
/// shape (6M̃, 6Ñ, 36); within each merged mode the beam index is the slow
/// (block) index.
inline PipelineOutput final_three_way(const DenseTensor& r4) {
    if (r4.order() != 5) throw parameter_error("final_three_way expects a 5-way tensor");
    PipelineOutput out;
    out.m_tilde = r4.dim(0);
    out.n_tilde = r4.dim(2);
    out.r5 = group_modes(r4, {{0, 1}, {2, 3}, {4}});
    return out;
}

/// Full chain from an eight-way covariance tensor to the three-way tensor.
inline PipelineOutput coarray_pipeline(const DenseTensor& r8, const CoarraySpec& tx_coarray,
                                       const CoarraySpec& rx_coarray) {
    const DenseTensor r2 = rearrange_and_group(r8);
    const DenseTensor r3 =
        apply_coarray_selection(r2, tx_coarray.selection, rx_coarray.selection);
    const BeamspaceMatrix w_t = dft_beamspace(tx_coarray.virtual_size());
    const BeamspaceMatrix w_r = dft_beamspace(rx_coarray.virtual_size());
    const DenseTensor r4 = to_real_beamspace(r3, w_t, w_r);
    return final_three_way(r4);
}

/// Convenience: scene → covariance (sample or ensemble) → three-way tensor.
inline PipelineOutput pipeline_from_scene(const SceneConfig& scene, bool exact_covariance) {
    const CoarraySpec tx = difference_coarray(scene.transmit);
    const CoarraySpec rx = difference_coarray(scene.receive);
    DenseTensor r8;
    if (exact_covariance) {
        r8 = exact_model_covariance(scene);
    } else {
        const SnapshotMatrix y = generate_snapshots(scene);
        const DenseTensor y5 =
            snapshot_tensor(y, scene.transmit.count(), scene.receive.count());
        r8 = covariance_tensor(y5);
    }
    return coarray_pipeline(r8, tx, rx);
}

} // namespace coemvs

#endif // COEMVS_PIPELINE_HPP
