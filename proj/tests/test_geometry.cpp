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
#include "coemvs/geometry.hpp"
#include "coemvs/tensor.hpp"

using namespace coemvs;

namespace {

std::vector<std::pair<int, int>> coprime_pairs_up_to(int limit) {
    std::vector<std::pair<int, int>> out;
    for (int m2 = 2; m2 <= limit; ++m2)
        for (int m1 = 1; m1 < m2; ++m1)
            if (std::gcd(m1, m2) == 1) out.emplace_back(m1, m2);
    return out;
}

} // namespace

TEST_CASE("coprime array for (3,4) matches the enumerated union")
{
    const SensorPositions arr = build_coprime_array(3, 4, ArrayRole::transmit);
    CHECK(arr.positions == std::vector<int>{0, 3, 4, 6, 8, 9, 12, 16, 20});
    CHECK(arr.count() == 9);
}

TEST_CASE("coprime array for (3,5) matches the enumerated union")
{
    const SensorPositions arr = build_coprime_array(3, 5, ArrayRole::receive);
    CHECK(arr.positions == std::vector<int>{0, 3, 5, 6, 9, 10, 12, 15, 20, 25});
    CHECK(arr.count() == 10);
}

TEST_CASE("smallest coprime pair gives a three-element array")
{
    const SensorPositions arr = build_coprime_array(1, 2, ArrayRole::transmit);
    CHECK(arr.positions == std::vector<int>{0, 1, 2});
}

TEST_CASE("non-coprime and mis-ordered pairs are rejected")
{
    CHECK_THROWS_AS(build_coprime_array(2, 4, ArrayRole::transmit), parameter_error);
    CHECK_THROWS_AS(build_coprime_array(4, 3, ArrayRole::transmit), parameter_error);
    CHECK_THROWS_AS(build_coprime_array(0, 3, ArrayRole::transmit), parameter_error);
}

TEST_CASE("difference coarray of a 3-element ULA")
{
    SensorPositions arr;
    arr.positions = {0, 1, 2};
    const CoarraySpec spec = difference_coarray(arr);
    CHECK(spec.diff_set == std::vector<int>{-2, -1, 0, 1, 2});
    CHECK(spec.weights.at(0) == 3);
    CHECK(spec.weights.at(1) == 2);
    CHECK(spec.weights.at(-1) == 2);
    CHECK(spec.weights.at(2) == 1);
    CHECK(spec.weights.at(-2) == 1);
    CHECK(spec.central_half_width == 2);
}

TEST_CASE("central segment sizes of the transmit and receive arrays")
{
    const CoarraySpec tx = difference_coarray(build_coprime_array(3, 4, ArrayRole::transmit));
    CHECK(tx.central_half_width == 15);
    CHECK(tx.virtual_size() == 31);
    CHECK(tx.virtual_size() == coprime_virtual_size(3, 4));

    const CoarraySpec rx = difference_coarray(build_coprime_array(3, 5, ArrayRole::receive));
    CHECK(rx.virtual_size() == 37);
    CHECK(rx.virtual_size() == coprime_virtual_size(3, 5));
}

TEST_CASE("coarray is symmetric and weights count all ordered pairs")
{
    for (const auto& [m1, m2] : coprime_pairs_up_to(8)) {
        const SensorPositions arr = build_coprime_array(m1, m2, ArrayRole::transmit);
        const CoarraySpec spec = difference_coarray(arr);
        const Index s = arr.count();

        Index total = 0;
        for (const auto& [lag, w] : spec.weights) {
            CHECK(spec.weights.at(-lag) == w);
            total += w;
        }
        CHECK(total == s * s);
        CHECK(spec.weights.at(0) == s);
    }
}

TEST_CASE("central segment size matches the closed form for all coprime pairs up to 8")
{
    for (const auto& [m1, m2] : coprime_pairs_up_to(8)) {
        const SensorPositions arr = build_coprime_array(m1, m2, ArrayRole::transmit);
        const CoarraySpec spec = difference_coarray(arr);
        INFO("pair (" << m1 << "," << m2 << ")");
        CHECK(spec.virtual_size() == coprime_virtual_size(m1, m2));
    }
}

TEST_CASE("selection matrix rows sum to one")
{
    for (const auto& [m1, m2] : coprime_pairs_up_to(6)) {
        const SensorPositions arr = build_coprime_array(m1, m2, ArrayRole::transmit);
        const CoarraySpec spec = difference_coarray(arr);
        for (Index r = 0; r < spec.selection.rows(); ++r)
            CHECK_THAT(spec.selection.row(r).sum(), Catch::Matchers::WithinAbs(1.0, 1e-14));
    }
}

TEST_CASE("selection matrix of a 3-element ULA")
{
    SensorPositions arr;
    arr.positions = {0, 1, 2};
    const CoarraySpec spec = difference_coarray(arr);
    REQUIRE(spec.selection.rows() == 5);
    REQUIRE(spec.selection.cols() == 9);
    const Index zero_row = 2; // lag 0
    int thirds = 0;
    for (Index c = 0; c < 9; ++c)
        if (spec.selection(zero_row, c) != 0.0) {
            CHECK_THAT(spec.selection(zero_row, c), Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-15));
            ++thirds;
        }
    CHECK(thirds == 3);
}

TEST_CASE("selection matrix reproduces the contiguous virtual steering vector")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ang(0.0, pi / 2);
    for (const auto& arr : {build_coprime_array(3, 4, ArrayRole::transmit),
                            build_coprime_array(3, 5, ArrayRole::receive)}) {
        const CoarraySpec spec = difference_coarray(arr);
        for (int rep = 0; rep < 200; ++rep) {
            const double theta = ang(rng);
            const CVec a = steering_vector(arr, theta);
            const CVec pair_grid = kronecker_vec(a, a.conjugate());
            const CVec virt = spec.selection.cast<cxd>() * pair_grid;
            const CVec expect = virtual_ula_steering(spec.central_half_width, theta);
            REQUIRE(virt.size() == expect.size());
            CHECK((virt - expect).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}
