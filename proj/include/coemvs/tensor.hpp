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

#ifndef COEMVS_TENSOR_HPP
#define COEMVS_TENSOR_HPP

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "common.hpp"

namespace coemvs {

using CMatRM = Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense N-way complex tensor.
///
/// Entries are stored row-major: the last mode index varies fastest. With this
/// layout, flattening a rank-1 tensor a∘b∘... gives the Kronecker vector
/// a⊗b⊗... in which the first factor varies slowest — the one vectorization
/// convention used throughout the library (selection matrices, Khatri-Rao
/// products and unfoldings all follow it).
class DenseTensor {
public:
    DenseTensor() = default;

    explicit DenseTensor(std::vector<Index> shape)
        : shape_(std::move(shape)), data_(checked_size(shape_), cxd{0.0, 0.0}) {}

    DenseTensor(std::vector<Index> shape, std::vector<cxd> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (static_cast<Index>(data_.size()) != checked_size(shape_))
            throw parameter_error("tensor data length does not match shape");
    }

    Index order() const { return static_cast<Index>(shape_.size()); }
    Index size() const { return static_cast<Index>(data_.size()); }
    const std::vector<Index>& shape() const { return shape_; }
    Index dim(Index n) const { return shape_.at(static_cast<std::size_t>(n)); }

    cxd* data() { return data_.data(); }
    const cxd* data() const { return data_.data(); }

    cxd& operator[](Index i) { return data_[static_cast<std::size_t>(i)]; }
    const cxd& operator[](Index i) const { return data_[static_cast<std::size_t>(i)]; }

    cxd& at(const std::vector<Index>& idx) { return data_[static_cast<std::size_t>(linear(idx))]; }
    const cxd& at(const std::vector<Index>& idx) const {
        return data_[static_cast<std::size_t>(linear(idx))];
    }

    /// Row-major strides; stride[n] is the linear step of mode n.
    std::vector<Index> strides() const {
        std::vector<Index> s(shape_.size());
        Index acc = 1;
        for (Index n = order() - 1; n >= 0; --n) {
            s[static_cast<std::size_t>(n)] = acc;
            acc *= shape_[static_cast<std::size_t>(n)];
        }
        return s;
    }

    Index linear(const std::vector<Index>& idx) const {
        if (static_cast<Index>(idx.size()) != order())
            throw parameter_error("index arity does not match tensor order");
        Index lin = 0;
        for (Index n = 0; n < order(); ++n) {
            Index i = idx[static_cast<std::size_t>(n)];
            Index d = shape_[static_cast<std::size_t>(n)];
            if (i < 0 || i >= d) throw parameter_error("tensor index out of bounds");
            lin = lin * d + i;
        }
        return lin;
    }

    /// Metadata-only reshape; entry count must be preserved.
    DenseTensor reshaped(std::vector<Index> new_shape) const {
        if (checked_size(new_shape) != size())
            throw parameter_error("reshape changes the number of entries");
        return DenseTensor(std::move(new_shape), data_);
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const cxd& v : data_) acc += std::norm(v);
        return std::sqrt(acc);
    }

    /// View the flattened data as a rows×cols row-major matrix (rows·cols must
    /// equal size()).
    Eigen::Map<const CMatRM> as_matrix(Index rows, Index cols) const {
        if (rows * cols != size()) throw parameter_error("matrix view does not match tensor size");
        return Eigen::Map<const CMatRM>(data_.data(), rows, cols);
    }
    Eigen::Map<CMatRM> as_matrix(Index rows, Index cols) {
        if (rows * cols != size()) throw parameter_error("matrix view does not match tensor size");
        return Eigen::Map<CMatRM>(data_.data(), rows, cols);
    }

    static DenseTensor from_vector(const CVec& v) {
        DenseTensor t({v.size()});
        Eigen::Map<CVec>(t.data(), v.size()) = v;
        return t;
    }

private:
    static Index checked_size(const std::vector<Index>& shape) {
        if (shape.empty()) throw parameter_error("tensor must have at least one mode");
        Index n = 1;
        for (Index d : shape) {
            if (d <= 0) throw parameter_error("tensor dimensions must be positive");
            n *= d;
        }
        return n;
    }

    std::vector<Index> shape_;
    std::vector<cxd> data_;
};

/// Kronecker product, first factor varies slowest.
inline CMat kronecker(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline CVec kronecker_vec(const CVec& a, const CVec& b) {
    CVec out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Column-wise Kronecker (Khatri-Rao) product of two matrices with equal
/// column counts.
inline CMat khatri_rao(const CMat& a, const CMat& b) {
    if (a.cols() != b.cols())
        throw parameter_error("khatri_rao requires equal column counts");
    CMat out(a.rows() * b.rows(), a.cols());
    for (Index k = 0; k < a.cols(); ++k)
        for (Index i = 0; i < a.rows(); ++i)
            out.col(k).segment(i * b.rows(), b.rows()) = a(i, k) * b.col(k);
    return out;
}

/// Outer product; output shape is the concatenation of both shapes.
inline DenseTensor outer_product(const DenseTensor& a, const DenseTensor& b) {
    std::vector<Index> shape = a.shape();
    shape.insert(shape.end(), b.shape().begin(), b.shape().end());
    DenseTensor out(std::move(shape));
    const Index nb = b.size();
    for (Index i = 0; i < a.size(); ++i) {
        const cxd ai = a[i];
        cxd* dst = out.data() + i * nb;
        const cxd* src = b.data();
        for (Index j = 0; j < nb; ++j) dst[j] = ai * src[j];
    }
    return out;
}

/// Mode-n tensor–matrix product: mode n of x is contracted with the columns of
/// a (a has shape J×I_n), replacing dimension I_n by J.
inline DenseTensor mode_n_product(const DenseTensor& x, const CMat& a, Index n) {
    if (n < 0 || n >= x.order()) throw parameter_error("mode index out of range");
    if (a.cols() != x.dim(n))
        throw parameter_error("matrix column count does not match tensor mode dimension");

    Index left = 1, right = 1;
    for (Index m = 0; m < n; ++m) left *= x.dim(m);
    for (Index m = n + 1; m < x.order(); ++m) right *= x.dim(m);

    std::vector<Index> out_shape = x.shape();
    out_shape[static_cast<std::size_t>(n)] = a.rows();
    DenseTensor out(std::move(out_shape));

    const Index in_block = x.dim(n) * right;
    const Index out_block = a.rows() * right;
    for (Index l = 0; l < left; ++l) {
        Eigen::Map<const CMatRM> slab(x.data() + l * in_block, x.dim(n), right);
        Eigen::Map<CMatRM> dst(out.data() + l * out_block, a.rows(), right);
        dst.noalias() = a * slab;
    }
    return out;
}

/// Reorders modes: output mode j carries input mode perm[j] (0-based).
inline DenseTensor permute_modes(const DenseTensor& x, const std::vector<Index>& perm) {
    const Index n = x.order();
    if (static_cast<Index>(perm.size()) != n) throw parameter_error("permutation arity mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Index p : perm) {
        if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)])
            throw parameter_error("invalid mode permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }

    std::vector<Index> out_shape(perm.size());
    for (Index j = 0; j < n; ++j)
        out_shape[static_cast<std::size_t>(j)] = x.dim(perm[static_cast<std::size_t>(j)]);
    DenseTensor out(out_shape);

    const std::vector<Index> in_strides = x.strides();
    std::vector<Index> gather(perm.size());
    for (Index j = 0; j < n; ++j)
        gather[static_cast<std::size_t>(j)] = in_strides[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];

    // Odometer walk over the output index space, tracking the input offset.
    std::vector<Index> idx(static_cast<std::size_t>(n), 0);
    Index src = 0;
    const Index total = out.size();
    for (Index lin = 0; lin < total; ++lin) {
        out[lin] = x[src];
        for (Index j = n - 1; j >= 0; --j) {
            auto uj = static_cast<std::size_t>(j);
            if (++idx[uj] < out_shape[uj]) {
                src += gather[uj];
                break;
            }
            src -= gather[uj] * (out_shape[uj] - 1);
            idx[uj] = 0;
        }
    }
    return out;
}

/// Merges consecutive modes: groups is an ordered partition of 0..N-1 into
/// contiguous ascending runs; each run collapses to one mode whose extent is
/// the product of the run (first mode of the run varies slowest). On a rank-1
/// tensor this turns each run's factor vectors into their Kronecker product.
inline DenseTensor group_modes(const DenseTensor& x, const std::vector<std::vector<Index>>& groups) {
    Index expect = 0;
    std::vector<Index> out_shape;
    out_shape.reserve(groups.size());
    for (const auto& g : groups) {
        if (g.empty()) throw parameter_error("empty mode group");
        Index extent = 1;
        for (Index m : g) {
            if (m != expect)
                throw parameter_error("mode groups must partition 0..N-1 contiguously in order");
            extent *= x.dim(m);
            ++expect;
        }
        out_shape.push_back(extent);
    }
    if (expect != x.order()) throw parameter_error("mode groups must cover every mode");
    return x.reshaped(std::move(out_shape));
}

/// Inverse of group_modes given the original shape.
inline DenseTensor ungroup_modes(const DenseTensor& x, std::vector<Index> original_shape) {
    return x.reshaped(std::move(original_shape));
}

/// Mode-n unfolding: rows are the mode-n fibers; columns run over the
/// remaining modes in cyclic order n+1, n+2, ..., wrapping around, with the
/// first of them varying slowest. For a 3-way CP tensor with factors (A, B, C)
/// this gives unfold(X,0) = A·(B⊙C)ᵀ, unfold(X,1) = B·(C⊙A)ᵀ and
/// unfold(X,2) = C·(A⊙B)ᵀ.
inline CMat unfold(const DenseTensor& x, Index n) {
    if (n < 0 || n >= x.order()) throw parameter_error("mode index out of range");
    const Index order = x.order();
    std::vector<Index> perm(static_cast<std::size_t>(order));
    for (Index j = 0; j < order; ++j)
        perm[static_cast<std::size_t>(j)] = (n + j) % order;
    DenseTensor moved = permute_modes(x, perm);
    return moved.as_matrix(x.dim(n), x.size() / x.dim(n));
}

/// Assembles a 3-way CP tensor Σ_k a_k ∘ b_k ∘ c_k from its factor matrices.
inline DenseTensor cp_tensor(const CMat& a, const CMat& b, const CMat& c) {
    if (a.cols() != b.cols() || b.cols() != c.cols())
        throw parameter_error("factor matrices must share a column count");
    DenseTensor out({a.rows(), b.rows(), c.rows()});
    Eigen::Map<CMatRM> flat(out.data(), a.rows() * b.rows(), c.rows());
    flat.noalias() = CMatRM(khatri_rao(a, b)) * c.transpose();
    return out;
}

} // namespace coemvs

#endif // COEMVS_TENSOR_HPP
