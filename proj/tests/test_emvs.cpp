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

#include <catch_amalgamated.hpp>

#include <random>

#include "coemvs/emvs.hpp"
#include "support/oracles.hpp"

using namespace coemvs;

TEST_CASE("spatial response at boresight with 45-degree polarization")
{
    const SpatialResponse r = spatial_response(0.0, 0.0, pi / 4, 0.0);
    const double s = std::sqrt(2.0) / 2.0;
    const Eigen::Matrix<cxd, 6, 1> expect{
        {s, 0.0}, {s, 0.0}, {0.0, 0.0}, {-s, 0.0}, {s, 0.0}, {0.0, 0.0}};
    CHECK((r.q - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("gamma=0 selects the second column of F")
{
    const SpatialResponse r = spatial_response(0.0, 0.0, 0.0, 1.234);
    const Eigen::Matrix<cxd, 6, 1> expect{
        {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    CHECK((r.q - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("q equals F times g for random angles")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(0.01, pi / 2 - 0.01);
    for (int rep = 0; rep < 50; ++rep) {
        const SpatialResponse r = spatial_response(ang(rng), ang(rng), ang(rng), ang(rng));
        CHECK((r.q - r.f * r.g).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("poynting angles round-trip the direction for random polarizations")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(0.01, pi / 2 - 0.01);
    const double theta = pi / 6, phi = pi / 4;
    for (int rep = 0; rep < 100; ++rep) {
        const SpatialResponse r = spatial_response(theta, phi, ang(rng), ang(rng));
        const PoyntingAngles pa = poynting_angles(r.q);
        CHECK(std::abs(pa.theta - theta) < 1e-10);
        CHECK(std::abs(pa.phi - phi) < 1e-10);
    }
}

TEST_CASE("poynting extraction is invariant under complex scaling")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ang(0.01, pi / 2 - 0.01);
    for (int rep = 0; rep < 50; ++rep) {
        const SpatialResponse r = spatial_response(ang(rng), ang(rng), ang(rng), ang(rng));
        const cxd alpha = cxd(1.7, -2.3);
        const PoyntingAngles a = poynting_angles(r.q);
        const PoyntingAngles b = poynting_angles((alpha * r.q).eval());
        CHECK(std::abs(a.theta - b.theta) < 1e-12);
        CHECK(std::abs(a.phi - b.phi) < 1e-12);
    }
}

TEST_CASE("boresight response has an axial poynting vector and undefined azimuth")
{
    const SpatialResponse r = spatial_response(0.0, 0.3, 0.4, 0.2);
    const Eigen::Vector3d uvw = poynting_direction(r.q);
    CHECK(std::abs(uvw.x()) < 1e-12);
    CHECK(std::abs(uvw.y()) < 1e-12);
    CHECK_THAT(uvw.z(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(poynting_angles(r.q), azimuth_undefined_error);
}

TEST_CASE("zero response halves are rejected")
{
    Eigen::Matrix<cxd, 6, 1> q = Eigen::Matrix<cxd, 6, 1>::Zero();
    q(0) = 1.0;
    CHECK_THROWS_AS(poynting_direction(q), degenerate_response_error);
}

TEST_CASE("steering vector basics")
{
    const SensorPositions arr = build_coprime_array(3, 4, ArrayRole::transmit);
    const CVec a0 = steering_vector(arr, 0.0);
    CHECK((a0 - CVec::Ones(arr.count())).cwiseAbs().maxCoeff() == 0.0);

    SensorPositions two;
    two.positions = {0, 1};
    const CVec a = steering_vector(two, pi / 2);
    CHECK(std::abs(a(0) - cxd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a(1) - cxd(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("steering vector entries stay on the unit circle")
{
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> ang(0.0, pi / 2);
    const SensorPositions arr = build_coprime_array(3, 5, ArrayRole::receive);
    for (int rep = 0; rep < 25; ++rep) {
        const CVec a = steering_vector(arr, ang(rng));
        for (Index i = 0; i < a.size(); ++i)
            CHECK_THAT(std::abs(a(i)), Catch::Matchers::WithinAbs(1.0, 1e-14));
    }
}

TEST_CASE("noise-free single-target single-snapshot output is the manifold column")
{
    SceneConfig scene = coemvs::testing::random_scene(1, 77);
    scene.snapshots = 1;
    scene.snr_db.reset();
    const SnapshotMatrix y = generate_snapshots(scene);
    const CVec c = scene_manifold(scene).col(0);
    // equal up to the unit-modulus source phase
    const cxd ratio = y.y(0, 0) / c(0);
    CHECK_THAT(std::abs(ratio), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK((y.y.col(0) - ratio * c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("snapshot generation is deterministic in the seed")
{
    SceneConfig scene = coemvs::testing::random_scene(3, 78);
    scene.snapshots = 16;
    scene.snr_db = 5.0;
    scene.rng_seed = 1234;
    const SnapshotMatrix a = generate_snapshots(scene);
    const SnapshotMatrix b = generate_snapshots(scene);
    REQUIRE(a.y.rows() == b.y.rows());
    CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample covariance diagonal converges to the noise variance")
{
    // Noise-dominated scene: signal 120 dB below the noise floor.
    SceneConfig scene;
    scene.transmit = build_coprime_array(1, 2, ArrayRole::transmit);
    scene.receive = build_coprime_array(1, 2, ArrayRole::receive);
    TargetParams t;
    t.theta_t = t.phi_t = t.gamma_t = t.eta_t = 0.3;
    t.theta_r = t.phi_r = t.gamma_r = t.eta_r = 0.4;
    scene.targets = {t};
    scene.snapshots = 100000;
    scene.snr_db = -120.0;
    scene.rng_seed = 99;

    const double nv = noise_variance(scene);
    const SnapshotMatrix y = generate_snapshots(scene);
    const RVec diag = y.y.rowwise().squaredNorm() / static_cast<double>(scene.snapshots);
    for (Index i = 0; i < diag.size(); ++i)
        CHECK_THAT(diag(i), Catch::Matchers::WithinRel(nv, 0.05));
}

TEST_CASE("scene validation rejects bad configurations")
{
    SceneConfig scene = coemvs::testing::random_scene(1, 80);
    scene.snapshots = 0;
    CHECK_THROWS_AS(validate_scene(scene), parameter_error);

    scene = coemvs::testing::random_scene(1, 81);
    scene.targets[0].power = 0.0;
    CHECK_THROWS_AS(validate_scene(scene), parameter_error);

    scene = coemvs::testing::random_scene(1, 82);
    scene.targets[0].theta_t = pi / 2;
    CHECK_THROWS_AS(validate_scene(scene), parameter_error);
}
