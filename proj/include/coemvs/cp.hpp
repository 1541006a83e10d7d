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

#ifndef COEMVS_CP_HPP
#define COEMVS_CP_HPP

#include <random>
#include <vector>

#include "common.hpp"
#include "hungarian.hpp"
#include "tensor.hpp"

namespace coemvs {

/// Trilinear alternating-least-squares settings.
struct TalsConfig {
    Index k = 1;               // CP rank / number of targets
    Index max_iter = 500;
    double tol = 1e-8;         // relative change of fit between sweeps
    Index restarts = 5;        // independent random initializations
    std::uint64_t rng_seed = 0;
};

/// Estimated CP factors of the three-way tensor. Columns of the three factors
/// are index-aligned; everything downstream keys off that pairing.
struct FactorSet {
    CMat c_t;     // 6M̃ × K
    CMat c_r;     // 6Ñ × K
    CMat q_kron;  // 36 × K
    double fit = 0.0;          // final relative residual ‖X − X̂‖/‖X‖
    Index iterations = 0;
    bool converged = false;
    std::vector<double> fit_history; // per-sweep fit of the returned restart
};

/// Identifiability limits of the three-way tensor with factor dimensions
/// (6M̃, 6Ñ, 36): the Kruskal count assuming maximal k-ranks, the
/// rotation-invariance constraint of the elevation solver, and their minimum.
struct IdentifiabilityBounds {
    Index k_kruskal = 0;
    Index k_rotation = 0;
    Index k_max = 0;
};

inline IdentifiabilityBounds kruskal_max_targets(Index m_tilde, Index n_tilde) {
    if (m_tilde < 2 || n_tilde < 2)
        throw parameter_error("virtual array sizes must be at least 2");
    IdentifiabilityBounds b;
    b.k_kruskal = (6 * m_tilde + 6 * n_tilde + 34) / 2;
    b.k_rotation = std::min(6 * (m_tilde - 1), 6 * (n_tilde - 1));
    b.k_max = std::min(b.k_kruskal, b.k_rotation);
    return b;
}

namespace detail {

/// Moore-Penrose pseudo-inverse of a small Hermitian Gram matrix. Returns
/// false when the matrix is numerically rank deficient.
inline bool pinv_gram(const CMat& g, CMat& out) {
    Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (smax <= 0.0) return false;
    if (sv(sv.size() - 1) < smax * 1e-13) return false;
    RVec inv = sv.cwiseInverse();
    out.noalias() = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    return true;
}

struct AlsRun {
    CMat a, b, c;
    double fit = 0.0;
    Index iterations = 0;
    bool converged = false;
    bool degenerate = false;
    std::vector<double> fit_history;
};

/// One ALS run from a random start. Factors are updated cyclically through
/// the least-squares solutions of the three unfolding models; the fit is the
/// exact relative residual evaluated against the mode-3 unfolding.
inline AlsRun run_als(const CMat& x1, const CMat& x2, const CMat& x3, Index k,
                      const TalsConfig& cfg, std::uint64_t seed) {
    const Index di = x1.rows(), dj = x2.rows(), dk = x3.rows();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_factor = [&](Index rows) {
        CMat f(rows, k);
        for (Index c = 0; c < rows; ++c)
            for (Index r = 0; r < k; ++r) f(c, r) = cxd(gauss(rng), gauss(rng));
        return f;
    };

    AlsRun run;
    run.a = random_factor(di);
    run.b = random_factor(dj);
    run.c = random_factor(dk);

    const double xnorm = x3.norm();
    if (xnorm == 0.0) {
        run.a.setZero();
        run.b.setZero();
        run.c.setZero();
        run.converged = true;
        return run;
    }

    CMat gram, pinv, kr;
    double prev_fit = std::numeric_limits<double>::infinity();
    for (Index it = 1; it <= cfg.max_iter; ++it) {
        // mode 1: X1 = A (B ⊙ C)ᵀ
        gram = (run.b.adjoint() * run.b).cwiseProduct(run.c.adjoint() * run.c);
        if (!pinv_gram(gram, pinv)) { run.degenerate = true; return run; }
        run.a.noalias() = x1 * khatri_rao(run.b, run.c).conjugate() * pinv.transpose();

        // mode 2: X2 = B (C ⊙ A)ᵀ
        gram = (run.c.adjoint() * run.c).cwiseProduct(run.a.adjoint() * run.a);
        if (!pinv_gram(gram, pinv)) { run.degenerate = true; return run; }
        run.b.noalias() = x2 * khatri_rao(run.c, run.a).conjugate() * pinv.transpose();

        // mode 3: X3 = C (A ⊙ B)ᵀ
        gram = (run.a.adjoint() * run.a).cwiseProduct(run.b.adjoint() * run.b);
        if (!pinv_gram(gram, pinv)) { run.degenerate = true; return run; }
        kr = khatri_rao(run.a, run.b);
        run.c.noalias() = x3 * kr.conjugate() * pinv.transpose();

        run.fit = (x3 - run.c * kr.transpose()).norm() / xnorm;
        run.fit_history.push_back(run.fit);
        run.iterations = it;

        if (run.fit < 1e-13 ||
            std::abs(prev_fit - run.fit) < cfg.tol * std::max(prev_fit, 1e-300)) {
            run.converged = true;
            break;
        }
        prev_fit = run.fit;
    }
    return run;
}

/// Equalizes the column norms of the three factors and rotates the phases of
/// the first two factors' dominant entries to real-positive, pushing all
/// scale and phase freedom into the third factor.
inline void balance_columns(CMat& a, CMat& b, CMat& c) {
    for (Index k = 0; k < a.cols(); ++k) {
        const double na = a.col(k).norm(), nb = b.col(k).norm(), nc = c.col(k).norm();
        if (na == 0.0 || nb == 0.0 || nc == 0.0) continue;
        const double nu = std::cbrt(na * nb * nc);
        Index ia = 0, ib = 0;
        a.col(k).cwiseAbs().maxCoeff(&ia);
        b.col(k).cwiseAbs().maxCoeff(&ib);
        const cxd pa = a(ia, k) / std::abs(a(ia, k));
        const cxd pb = b(ib, k) / std::abs(b(ib, k));
        a.col(k) *= (nu / na) / pa;
        b.col(k) *= (nu / nb) / pb;
        c.col(k) *= (nu / nc) * pa * pb;
    }
}

} // namespace detail

/// PARAFAC via trilinear alternating least squares. Runs cfg.restarts
/// independent random initializations and returns the one with the smallest
/// final residual; column norms are balanced across the three factors.
inline FactorSet tals(const DenseTensor& r5, const TalsConfig& cfg) {
    if (r5.order() != 3) throw parameter_error("tals expects a 3-way tensor");
    if (cfg.k < 1) throw parameter_error("CP rank must be >= 1");
    if (cfg.tol <= 0.0) throw parameter_error("tolerance must be positive");
    if (cfg.restarts < 1) throw parameter_error("at least one restart is required");

    const Index di = r5.dim(0), dj = r5.dim(1), dk = r5.dim(2);
    if (cfg.k >= 2) {
        const Index krank_sum =
            std::min(di, cfg.k) + std::min(dj, cfg.k) + std::min(dk, cfg.k);
        if (krank_sum < 2 * cfg.k + 2)
            throw identifiability_error(
                "CP rank exceeds the Kruskal uniqueness bound of the tensor dimensions");
    }

    const CMat x1 = unfold(r5, 0);
    const CMat x2 = unfold(r5, 1);
    const CMat x3 = unfold(r5, 2);

    detail::AlsRun best;
    bool have = false;
    Index degenerate_runs = 0;
    for (Index r = 0; r < cfg.restarts; ++r) {
        detail::AlsRun run =
            detail::run_als(x1, x2, x3, cfg.k, cfg, mix_seed(cfg.rng_seed + static_cast<std::uint64_t>(r)));
        if (run.degenerate) {
            ++degenerate_runs;
            continue;
        }
        if (!have || run.fit < best.fit) {
            best = std::move(run);
            have = true;
        }
    }
    if (!have)
        throw numeric_error("every ALS restart hit a singular Khatri-Rao system");

    detail::balance_columns(best.a, best.b, best.c);
    FactorSet out;
    out.c_t = std::move(best.a);
    out.c_r = std::move(best.b);
    out.q_kron = std::move(best.c);
    out.fit = best.fit;
    out.iterations = best.iterations;
    out.converged = best.converged;
    out.fit_history = std::move(best.fit_history);
    return out;
}

/// Column matching between an estimated and a reference factor set, resolving
/// the CP permutation/scale ambiguity. congruence(f, k) is the normalized
/// |inner product| of factor f's matched column against reference column k.
struct MatchResult {
    std::vector<Index> est_for_truth; // est column index matched to truth column k
    RMat congruence;                  // 3 × K
};

inline MatchResult match_factors(const FactorSet& est, const FactorSet& truth) {
    const Index k = truth.c_t.cols();
    if (est.c_t.cols() != k || est.c_r.cols() != k || est.q_kron.cols() != k)
        throw parameter_error("factor sets must have the same number of columns");

    auto congr = [](const CMat& a, Index ia, const CMat& b, Index ib) {
        const double na = a.col(ia).norm(), nb = b.col(ib).norm();
        if (na == 0.0 || nb == 0.0) return 0.0;
        return std::abs(a.col(ia).dot(b.col(ib))) / (na * nb);
    };

    RMat score(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            score(i, j) = congr(est.c_t, i, truth.c_t, j) + congr(est.c_r, i, truth.c_r, j) +
                          congr(est.q_kron, i, truth.q_kron, j);

    const std::vector<Index> est_to_truth = solve_assignment_max(score);
    MatchResult out;
    out.est_for_truth.assign(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < k; ++i)
        out.est_for_truth[static_cast<std::size_t>(est_to_truth[static_cast<std::size_t>(i)])] = i;
    out.congruence.resize(3, k);
    for (Index j = 0; j < k; ++j) {
        const Index i = out.est_for_truth[static_cast<std::size_t>(j)];
        out.congruence(0, j) = congr(est.c_t, i, truth.c_t, j);
        out.congruence(1, j) = congr(est.c_r, i, truth.c_r, j);
        out.congruence(2, j) = congr(est.q_kron, i, truth.q_kron, j);
    }
    return out;
}

} // namespace coemvs

#endif // COEMVS_CP_HPP
