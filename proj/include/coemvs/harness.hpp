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

#ifndef COEMVS_HARNESS_HPP
#define COEMVS_HARNESS_HPP

#include <atomic>
#include <chrono>
#include <thread>
#include <vector>

#include "common.hpp"
#include "config.hpp"
#include "cp.hpp"
#include "estimator.hpp"
#include "pipeline.hpp"

namespace coemvs {

/// Outcome of one Monte Carlo trial. On success, estimates are reordered to
/// the truth's target order (optimal assignment on the elevation pair, used
/// for scoring only); a failed trial carries the error category instead.
struct TrialResult {
    bool success = false;
    std::string error_category;
    std::vector<TargetEstimate> estimates;
    double tals_fit = 0.0;
    Index tals_iterations = 0;
    double wall_seconds = 0.0;
};

namespace detail {

inline std::vector<TargetEstimate> match_to_truth(const std::vector<TargetEstimate>& est,
                                                  const std::vector<TargetParams>& truth) {
    const Index k = static_cast<Index>(truth.size());
    RMat cost(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            const TargetEstimate& e = est[static_cast<std::size_t>(i)];
            const TargetParams& t = truth[static_cast<std::size_t>(j)];
            const double dt = e.theta_t - t.theta_t;
            const double dr = e.theta_r - t.theta_r;
            cost(i, j) = dt * dt + dr * dr;
        }
    const std::vector<Index> est_to_truth = solve_assignment_min(cost);
    std::vector<TargetEstimate> out(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i)
        out[static_cast<std::size_t>(est_to_truth[static_cast<std::size_t>(i)])] =
            est[static_cast<std::size_t>(i)];
    return out;
}

} // namespace detail

/// Runs one trial: derive the trial seed, simulate (or take the ensemble
/// covariance), run the coarray pipeline, decompose, extract and score.
inline TrialResult run_trial(const RunConfig& cfg, Index trial_index,
                             std::optional<Index> k_prefix = std::nullopt) {
    TrialResult out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        SceneConfig scene = scene_from_config(cfg, k_prefix);
        scene.rng_seed = cfg.base_seed ^ static_cast<std::uint64_t>(trial_index);

        const IdentifiabilityBounds bounds = kruskal_max_targets(
            coprime_virtual_size(cfg.m1, cfg.m2), coprime_virtual_size(cfg.n1, cfg.n2));
        if (scene.k() > bounds.k_max)
            throw identifiability_error("target count " + std::to_string(scene.k()) +
                                        " exceeds the identifiability limit " +
                                        std::to_string(bounds.k_max));

        const PipelineOutput p = pipeline_from_scene(scene, cfg.exact_covariance);

        TalsConfig tc;
        tc.k = scene.k();
        tc.max_iter = cfg.tals_max_iter;
        tc.tol = cfg.tals_tol;
        tc.restarts = cfg.tals_restarts;
        tc.rng_seed = mix_seed(scene.rng_seed ^ 0x74616c73ULL);
        const FactorSet f = tals(p.r5, tc);
        out.tals_fit = f.fit;
        out.tals_iterations = f.iterations;
        if (!f.converged) {
            out.error_category = "tals_nonconvergence";
            out.wall_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
            return out;
        }

        const EstimateSet est = estimate_all(f, p.m_tilde, p.n_tilde);
        for (const TargetEstimate& rec : est.targets) {
            if (!rec.ok) {
                out.error_category = "extraction: " + rec.error;
                out.wall_seconds = std::chrono::duration<double>(
                                       std::chrono::steady_clock::now() - t0)
                                       .count();
                return out;
            }
        }
        out.estimates = detail::match_to_truth(est.targets, scene.targets);
        out.success = true;
    } catch (const error& e) {
        out.error_category = e.category();
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// Runs `count` trials; workers pull trial indices from a shared counter, so
/// results are bitwise independent of the thread schedule.
inline std::vector<TrialResult> run_trials(const RunConfig& cfg, Index count,
                                           std::optional<Index> k_prefix = std::nullopt) {
    std::vector<TrialResult> results(static_cast<std::size_t>(count));
    Index workers = cfg.threads > 0
                        ? cfg.threads
                        : static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (Index t = 0; t < count; ++t) results[static_cast<std::size_t>(t)] = run_trial(cfg, t, k_prefix);
        return results;
    }
    std::atomic<Index> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const Index t = next.fetch_add(1);
                if (t >= count) break;
                results[static_cast<std::size_t>(t)] = run_trial(cfg, t, k_prefix);
            }
        });
    }
    for (std::thread& th : pool) th.join();
    return results;
}

inline constexpr std::array<const char*, 4> angle_group_names = {"theta_t", "phi_t", "theta_r",
                                                                 "phi_r"};
inline constexpr std::array<const char*, 4> polarization_group_names = {"gamma_t", "eta_t",
                                                                        "gamma_r", "eta_r"};

namespace detail {

inline std::array<double, 8> record_angles(const TargetEstimate& e) {
    return {e.theta_t, e.phi_t, e.gamma_t, e.eta_t, e.theta_r, e.phi_r, e.gamma_r, e.eta_r};
}

inline std::array<double, 8> record_angles(const TargetParams& t) {
    return {t.theta_t, t.phi_t, t.gamma_t, t.eta_t, t.theta_r, t.phi_r, t.gamma_r, t.eta_r};
}

// family index -> group: 0,1,4,5 are angle (-d); 2,3,6,7 polarization (-p).
inline bool is_angle_family(std::size_t f) { return f == 0 || f == 1 || f == 4 || f == 5; }

} // namespace detail

/// Root mean square error per Monte Carlo aggregation over aligned
/// (estimate, truth) record pairs: sqrt of the mean squared error over all
/// records and the four families of each group, reported in degrees.
struct GroupRmse {
    double angle_deg = 0.0;
    double polarization_deg = 0.0;
};

inline GroupRmse rmse(const std::vector<TargetEstimate>& estimates,
                      const std::vector<TargetParams>& truths) {
    if (estimates.size() != truths.size())
        throw parameter_error("rmse needs aligned estimate and truth lists");
    if (estimates.empty()) throw parameter_error("rmse needs at least one record");
    double sq_angle = 0.0, sq_pol = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const auto e = detail::record_angles(estimates[i]);
        const auto t = detail::record_angles(truths[i]);
        for (std::size_t f = 0; f < 8; ++f) {
            const double err = rad2deg(e[f] - t[f]);
            (detail::is_angle_family(f) ? sq_angle : sq_pol) += err * err;
        }
    }
    const double denom = 4.0 * static_cast<double>(estimates.size());
    return {std::sqrt(sq_angle / denom), std::sqrt(sq_pol / denom)};
}

/// Aggregate statistics of one sweep point.
struct GroupStats {
    Index trials = 0;
    Index failures = 0;
    GroupRmse rmse;
    double bias_angle_deg = 0.0;        // mean |mean(est)-truth| over group params
    double bias_polarization_deg = 0.0;
    std::array<double, 8> rmse_family_deg{};  // per family, Eq.-style single-family RMSE
    std::array<std::vector<double>, 8> bias_family_deg; // per family, per target
};

inline GroupStats aggregate_trials(const std::vector<TrialResult>& trials,
                                   const std::vector<TargetParams>& truth) {
    GroupStats st;
    st.trials = static_cast<Index>(trials.size());
    const Index k = static_cast<Index>(truth.size());

    std::vector<TargetEstimate> flat_est;
    std::vector<TargetParams> flat_truth;
    std::array<std::vector<double>, 8> err_sq;   // per family
    std::array<RVec, 8> mean_est;
    for (auto& m : mean_est) m = RVec::Zero(k);
    Index successes = 0;

    for (const TrialResult& tr : trials) {
        if (!tr.success) {
            ++st.failures;
            continue;
        }
        ++successes;
        for (Index t = 0; t < k; ++t) {
            const auto e = detail::record_angles(tr.estimates[static_cast<std::size_t>(t)]);
            const auto g = detail::record_angles(truth[static_cast<std::size_t>(t)]);
            flat_est.push_back(tr.estimates[static_cast<std::size_t>(t)]);
            flat_truth.push_back(truth[static_cast<std::size_t>(t)]);
            for (std::size_t f = 0; f < 8; ++f) {
                const double err = rad2deg(e[f] - g[f]);
                err_sq[f].push_back(err * err);
                mean_est[f](t) += rad2deg(e[f]);
            }
        }
    }
    if (successes == 0) return st;

    st.rmse = rmse(flat_est, flat_truth);
    double bias_a = 0.0, bias_p = 0.0;
    for (std::size_t f = 0; f < 8; ++f) {
        double acc = 0.0;
        for (double v : err_sq[f]) acc += v;
        st.rmse_family_deg[f] = std::sqrt(acc / static_cast<double>(err_sq[f].size()));
        st.bias_family_deg[f].resize(static_cast<std::size_t>(k));
        for (Index t = 0; t < k; ++t) {
            const auto g = detail::record_angles(truth[static_cast<std::size_t>(t)]);
            const double bias =
                mean_est[f](t) / static_cast<double>(successes) - rad2deg(g[f]);
            st.bias_family_deg[f][static_cast<std::size_t>(t)] = bias;
            (detail::is_angle_family(f) ? bias_a : bias_p) += std::abs(bias);
        }
    }
    st.bias_angle_deg = bias_a / static_cast<double>(4 * k);
    st.bias_polarization_deg = bias_p / static_cast<double>(4 * k);
    return st;
}

enum class SweepKind { snr, snapshots, targets };

struct SweepPoint {
    double sweep_value = 0.0;
    GroupStats stats;
    double wall_seconds = 0.0; // reported on stderr only, never in the CSV
};

struct RmseReport {
    std::string sweep_name;
    std::vector<SweepPoint> points;
};

/// Monte Carlo sweep over SNR, snapshot count or target count. Deterministic
/// for a fixed config and base seed.
inline RmseReport run_sweep(const RunConfig& cfg, SweepKind kind) {
    RmseReport report;
    std::vector<double> values;
    switch (kind) {
        case SweepKind::snr:
            report.sweep_name = "snr_db";
            if (cfg.snr_sweep_db.empty()) throw parameter_error("snr_sweep is empty");
            values = cfg.snr_sweep_db;
            break;
        case SweepKind::snapshots:
            report.sweep_name = "snapshots";
            if (cfg.snapshot_sweep.empty()) throw parameter_error("snapshot_sweep is empty");
            for (Index v : cfg.snapshot_sweep) values.push_back(static_cast<double>(v));
            break;
        case SweepKind::targets:
            report.sweep_name = "k";
            if (cfg.k_sweep.empty()) throw parameter_error("k_sweep is empty");
            for (Index v : cfg.k_sweep) values.push_back(static_cast<double>(v));
            break;
    }

    for (double v : values) {
        RunConfig point_cfg = cfg;
        std::optional<Index> k_prefix;
        switch (kind) {
            case SweepKind::snr: point_cfg.snr_db = v; break;
            case SweepKind::snapshots: point_cfg.snapshots = static_cast<Index>(v); break;
            case SweepKind::targets: k_prefix = static_cast<Index>(v); break;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<TrialResult> trials = run_trials(point_cfg, cfg.trials, k_prefix);
        const SceneConfig scene = scene_from_config(point_cfg, k_prefix);

        SweepPoint pt;
        pt.sweep_value = v;
        pt.stats = aggregate_trials(trials, scene.targets);
        pt.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.points.push_back(std::move(pt));
    }
    return report;
}

} // namespace coemvs

#endif // COEMVS_HARNESS_HPP
