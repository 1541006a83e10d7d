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

#ifndef COEMVS_EMVS_HPP
#define COEMVS_EMVS_HPP

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "tensor.hpp"

namespace coemvs {

/// Electric/magnetic response halves of an EMVS are numerically zero.
struct degenerate_response_error : error {
    explicit degenerate_response_error(const std::string& what)
        : error("degenerate_response", what) {}
};

/// Poynting direction is parallel to the array axis (boresight): azimuth
/// carries no information.
struct azimuth_undefined_error : error {
    explicit azimuth_undefined_error(const std::string& what)
        : error("azimuth_undefined", what) {}
};

/// One target: four transmit-side and four receive-side angles plus power.
/// Angles are radians; the admissible range of every angle is [0, pi/2).
struct TargetParams {
    double theta_t = 0.0, phi_t = 0.0, gamma_t = 0.0, eta_t = 0.0;
    double theta_r = 0.0, phi_r = 0.0, gamma_r = 0.0, eta_r = 0.0;
    double power = 1.0;
};

/// Six-component EMVS response q = F(θ,φ)·g(γ,η).
struct SpatialResponse {
    Eigen::Matrix<cxd, 6, 1> q;
    Eigen::Matrix<cxd, 6, 2> f;
    Eigen::Matrix<cxd, 2, 1> g;
};

/// Spatial angular location matrix F(θ,φ); real-valued but kept complex for
/// uniform downstream algebra.
inline Eigen::Matrix<cxd, 6, 2> spatial_location_matrix(double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    Eigen::Matrix<cxd, 6, 2> f;
    f << cp * ct, -sp,
         sp * ct, cp,
         -st,     0.0,
         -sp,     -cp * ct,
         cp,      -sp * ct,
         0.0,     st;
    return f;
}

inline Eigen::Matrix<cxd, 2, 1> polarization_vector(double gamma, double eta) {
    Eigen::Matrix<cxd, 2, 1> g;
    g << std::sin(gamma) * std::exp(j1c * eta), std::cos(gamma);
    return g;
}

inline SpatialResponse spatial_response(double theta, double phi, double gamma, double eta) {
    if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(gamma) ||
        !std::isfinite(eta))
        throw parameter_error("angles must be finite");
    SpatialResponse r;
    r.f = spatial_location_matrix(theta, phi);
    r.g = polarization_vector(gamma, eta);
    r.q = r.f * r.g;
    return r;
}

/// Normalized Poynting direction of an EMVS response: the cross product of
/// the normalized electric half with the conjugated normalized magnetic half.
/// For a model response this is exactly [sinθcosφ, sinθsinφ, cosθ] and it is
/// invariant under complex scaling of q.
inline Eigen::Vector3d poynting_direction(const Eigen::Matrix<cxd, 6, 1>& q) {
    const Eigen::Matrix<cxd, 3, 1> e = q.head<3>();
    const Eigen::Matrix<cxd, 3, 1> h = q.tail<3>();
    const double en = e.norm(), hn = h.norm();
    if (en == 0.0 || hn == 0.0)
        throw degenerate_response_error("electric or magnetic response half has zero norm");
    const Eigen::Matrix<cxd, 3, 1> cross = (e / en).cross(h.conjugate() / hn);
    return cross.real();
}

struct PoyntingAngles {
    double theta = 0.0;
    double phi = 0.0;
};

/// Extracts (θ, φ) from the Poynting direction. Throws azimuth_undefined_error
/// at boresight (θ = 0), where the in-plane components vanish.
inline PoyntingAngles poynting_angles(const Eigen::Matrix<cxd, 6, 1>& q) {
    const Eigen::Vector3d uvw = poynting_direction(q);
    PoyntingAngles out;
    out.theta = std::acos(std::clamp(uvw.z(), -1.0, 1.0));
    constexpr double tol = 1e-9;
    if (std::abs(uvw.x()) < tol && std::abs(uvw.y()) < tol)
        throw azimuth_undefined_error("poynting vector is axial; azimuth undefined");
    out.phi = std::atan2(uvw.y(), uvw.x());
    return out;
}

/// Physical steering vector: element at grid position p responds with
/// e^{-jπ·p·sinθ}.
inline CVec steering_vector(const SensorPositions& arr, double theta) {
    const double s = std::sin(theta);
    if (std::abs(s) > 1.0) throw parameter_error("|sin(theta)| must not exceed 1");
    CVec a(arr.count());
    for (Index i = 0; i < arr.count(); ++i)
        a(i) = std::exp(-j1c * pi * static_cast<double>(arr.positions[static_cast<std::size_t>(i)]) * s);
    return a;
}

/// Steering vector of the contiguous virtual ULA covering lags -h..h; the
/// entry at lag u is e^{+jπ·u·sinθ}, the form the coarray selection produces.
inline CVec virtual_ula_steering(int half_width, double theta) {
    CVec a(2 * half_width + 1);
    for (int u = -half_width; u <= half_width; ++u)
        a(u + half_width) = std::exp(j1c * pi * static_cast<double>(u) * std::sin(theta));
    return a;
}

/// Synthetic-scene description. snr_db empty means noise-free snapshots.
struct SceneConfig {
    SensorPositions transmit;
    SensorPositions receive;
    std::vector<TargetParams> targets;
    Index snapshots = 1;
    std::optional<double> snr_db;
    std::uint64_t rng_seed = 0;

    Index k() const { return static_cast<Index>(targets.size()); }
    Index channels() const { return 36 * transmit.count() * receive.count(); }
};

inline void validate_scene(const SceneConfig& scene) {
    if (scene.targets.empty()) throw parameter_error("scene needs at least one target");
    if (scene.snapshots < 1) throw parameter_error("snapshot count must be >= 1");
    if (scene.transmit.positions.empty() || scene.receive.positions.empty())
        throw parameter_error("scene arrays must not be empty");
    for (const TargetParams& t : scene.targets) {
        for (double a : {t.theta_t, t.phi_t, t.gamma_t, t.eta_t, t.theta_r, t.phi_r, t.gamma_r,
                         t.eta_r}) {
            if (!(a >= 0.0 && a < pi / 2))
                throw parameter_error("target angles must lie in [0, pi/2)");
        }
        if (!(t.power > 0.0)) throw parameter_error("target power must be positive");
    }
}

/// Joint transmit-receive manifold column of one target:
/// (a_t ⊗ q_t) ⊗ (a_r ⊗ q_r), length 36·M·N.
inline CVec target_manifold_column(const SceneConfig& scene, const TargetParams& t) {
    const CVec at = steering_vector(scene.transmit, t.theta_t);
    const CVec ar = steering_vector(scene.receive, t.theta_r);
    const CVec qt = spatial_response(t.theta_t, t.phi_t, t.gamma_t, t.eta_t).q;
    const CVec qr = spatial_response(t.theta_r, t.phi_r, t.gamma_r, t.eta_r).q;
    return kronecker_vec(kronecker_vec(at, qt), kronecker_vec(ar, qr));
}

/// All K manifold columns as a 36MN × K matrix.
inline CMat scene_manifold(const SceneConfig& scene) {
    CMat c(scene.channels(), scene.k());
    for (Index k = 0; k < scene.k(); ++k)
        c.col(k) = target_manifold_column(scene, scene.targets[static_cast<std::size_t>(k)]);
    return c;
}

/// Per-channel noise variance realizing the configured SNR, where SNR is the
/// ratio of the expected signal power averaged over all 36MN channels to the
/// per-channel noise variance. Returns 0 for a noise-free scene.
inline double noise_variance(const SceneConfig& scene, const CMat& manifold) {
    if (!scene.snr_db) return 0.0;
    double sig = 0.0;
    for (Index k = 0; k < scene.k(); ++k)
        sig += scene.targets[static_cast<std::size_t>(k)].power * manifold.col(k).squaredNorm();
    sig /= static_cast<double>(scene.channels());
    return sig * std::pow(10.0, -*scene.snr_db / 10.0);
}

inline double noise_variance(const SceneConfig& scene) {
    return noise_variance(scene, scene_manifold(scene));
}

/// Matched-filtered array output, 36MN × L.
struct SnapshotMatrix {
    CMat y;
};

/// Draws L snapshots of the post-matched-filter model Y = C·S + N.
///
/// Sources are unit-modulus with i.i.d. uniform random phase (stationary,
/// non-Gaussian, uncorrelated in expectation), scaled by the target power;
/// noise is circular complex Gaussian. The draw order is fixed so a given
/// rng_seed reproduces Y bit for bit.
inline SnapshotMatrix generate_snapshots(const SceneConfig& scene) {
    validate_scene(scene);
    const CMat c = scene_manifold(scene);
    const Index k = scene.k(), l = scene.snapshots;

    std::mt19937_64 rng(scene.rng_seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);

    CMat s(k, l);
    for (Index ik = 0; ik < k; ++ik) {
        const double amp = std::sqrt(scene.targets[static_cast<std::size_t>(ik)].power);
        for (Index il = 0; il < l; ++il) s(ik, il) = amp * std::exp(j1c * phase(rng));
    }

    SnapshotMatrix out;
    out.y.noalias() = c * s;

    const double nv = noise_variance(scene, c);
    if (nv > 0.0) {
        std::normal_distribution<double> gauss(0.0, std::sqrt(nv / 2.0));
        for (Index il = 0; il < l; ++il)
            for (Index r = 0; r < out.y.rows(); ++r)
                out.y(r, il) += cxd(gauss(rng), gauss(rng));
    }
    return out;
}

} // namespace coemvs

#endif // COEMVS_EMVS_HPP
