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

#include "coemvs/tensor.hpp"
#include "support/oracles.hpp"

using namespace coemvs;
using coemvs::testing::random_matrix;
using coemvs::testing::random_tensor;

TEST_CASE("outer product of scalars multiplies")
{
    DenseTensor a({1});
    DenseTensor b({1});
    a[0] = 2.0;
    b[0] = 3.0;
    const DenseTensor c = outer_product(a, b);
    REQUIRE(c.order() == 2);
    CHECK(c[0] == cxd(6.0, 0.0));
}

TEST_CASE("outer product of vectors is the rank-1 matrix")
{
    std::mt19937_64 rng(11);
    const DenseTensor a = random_tensor({4}, rng);
    const DenseTensor b = random_tensor({5}, rng);
    const DenseTensor c = outer_product(a, b);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 5; ++j)
            CHECK(c.at({i, j}) == a[i] * b[j]);
}

TEST_CASE("outer product norm is multiplicative")
{
    std::mt19937_64 rng(12);
    const DenseTensor a = random_tensor({3, 4}, rng);
    const DenseTensor b = random_tensor({2, 5}, rng);
    const DenseTensor c = outer_product(a, b);
    CHECK_THAT(c.frobenius_norm(),
               Catch::Matchers::WithinRel(a.frobenius_norm() * b.frobenius_norm(), 1e-12));
}

TEST_CASE("mode product with the identity leaves the tensor unchanged")
{
    std::mt19937_64 rng(13);
    const DenseTensor x = random_tensor({3, 4, 5}, rng);
    for (Index n = 0; n < 3; ++n) {
        const DenseTensor y = mode_n_product(x, CMat::Identity(x.dim(n), x.dim(n)), n);
        CHECK(coemvs::testing::relative_error(y, x) < 1e-15);
    }
}

TEST_CASE("mode product matches the unfolding identity")
{
    std::mt19937_64 rng(14);
    const DenseTensor x = random_tensor({3, 4, 5}, rng);
    const CMat a = random_matrix(6, 3, rng);
    const DenseTensor y = mode_n_product(x, a, 0);
    const CMat lhs = unfold(y, 0);
    const CMat rhs = a * unfold(x, 0);
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("mode products on distinct modes commute")
{
    std::mt19937_64 rng(15);
    for (int rep = 0; rep < 5; ++rep) {
        const DenseTensor x = random_tensor({3, 4, 5, 2}, rng);
        const CMat a = random_matrix(6, 4, rng);
        const CMat b = random_matrix(3, 2, rng);
        const DenseTensor ab = mode_n_product(mode_n_product(x, a, 1), b, 3);
        const DenseTensor ba = mode_n_product(mode_n_product(x, b, 3), a, 1);
        CHECK(coemvs::testing::relative_error(ab, ba) < 1e-13);
    }
}

TEST_CASE("mode product rejects a dimension mismatch")
{
    std::mt19937_64 rng(16);
    const DenseTensor x = random_tensor({3, 4}, rng);
    CHECK_THROWS_AS(mode_n_product(x, CMat::Identity(5, 5), 0), parameter_error);
}

TEST_CASE("identity permutation and inverse permutation round-trip")
{
    std::mt19937_64 rng(17);
    const DenseTensor x = random_tensor({2, 3, 4, 5}, rng);
    const DenseTensor same = permute_modes(x, {0, 1, 2, 3});
    CHECK(coemvs::testing::relative_error(same, x) == 0.0);

    const std::vector<Index> perm = {2, 0, 3, 1};
    std::vector<Index> inv(4);
    for (Index j = 0; j < 4; ++j) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = j;
    const DenseTensor back = permute_modes(permute_modes(x, perm), inv);
    CHECK(coemvs::testing::relative_error(back, x) == 0.0);
}

TEST_CASE("permuting a matrix transposes it")
{
    std::mt19937_64 rng(18);
    const DenseTensor x = random_tensor({3, 5}, rng);
    const DenseTensor t = permute_modes(x, {1, 0});
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 5; ++j) CHECK(t.at({j, i}) == x.at({i, j}));
}

TEST_CASE("permute rejects non-permutations")
{
    std::mt19937_64 rng(19);
    const DenseTensor x = random_tensor({2, 2}, rng);
    CHECK_THROWS_AS(permute_modes(x, {0, 0}), parameter_error);
    CHECK_THROWS_AS(permute_modes(x, {0, 2}), parameter_error);
}

TEST_CASE("grouping an outer product of vectors gives the Kronecker vector")
{
    std::mt19937_64 rng(20);
    const DenseTensor a = random_tensor({3}, rng);
    const DenseTensor b = random_tensor({4}, rng);
    const DenseTensor g = group_modes(outer_product(a, b), {{0, 1}});
    REQUIRE(g.order() == 1);
    const CVec av = Eigen::Map<const CVec>(a.data(), 3);
    const CVec bv = Eigen::Map<const CVec>(b.data(), 4);
    const CVec expect = kronecker_vec(av, bv);
    for (Index i = 0; i < 12; ++i) CHECK(g[i] == expect(i));
}

TEST_CASE("group then ungroup restores the shape")
{
    std::mt19937_64 rng(21);
    const DenseTensor x = random_tensor({2, 3, 4, 5}, rng);
    const DenseTensor g = group_modes(x, {{0, 1}, {2, 3}});
    REQUIRE(g.shape() == std::vector<Index>{6, 20});
    const DenseTensor u = ungroup_modes(g, x.shape());
    CHECK(coemvs::testing::relative_error(u, x) == 0.0);
}

TEST_CASE("grouping a rank-1 4-way tensor matches explicit Kronecker factors")
{
    std::mt19937_64 rng(22);
    const DenseTensor a = random_tensor({2}, rng);
    const DenseTensor b = random_tensor({3}, rng);
    const DenseTensor c = random_tensor({4}, rng);
    const DenseTensor d = random_tensor({5}, rng);
    const DenseTensor x = outer_product(outer_product(a, b), outer_product(c, d));
    const DenseTensor g = group_modes(x, {{0, 1}, {2, 3}});

    const CVec ab = kronecker_vec(Eigen::Map<const CVec>(a.data(), 2),
                                  Eigen::Map<const CVec>(b.data(), 3));
    const CVec cd = kronecker_vec(Eigen::Map<const CVec>(c.data(), 4),
                                  Eigen::Map<const CVec>(d.data(), 5));
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 20; ++j) CHECK(g.at({i, j}) == ab(i) * cd(j));
}

TEST_CASE("group_modes rejects a non-partition")
{
    std::mt19937_64 rng(23);
    const DenseTensor x = random_tensor({2, 3, 4}, rng);
    CHECK_THROWS_AS(group_modes(x, {{0, 2}, {1}}), parameter_error);
    CHECK_THROWS_AS(group_modes(x, {{0, 1}}), parameter_error);
}

TEST_CASE("khatri-rao of single columns equals the Kronecker of the columns")
{
    std::mt19937_64 rng(24);
    const CMat a = random_matrix(3, 1, rng);
    const CMat b = random_matrix(4, 1, rng);
    const CMat kr = khatri_rao(a, b);
    const CVec kv = kronecker_vec(a.col(0), b.col(0));
    CHECK((kr.col(0) - kv).norm() == 0.0);
}

TEST_CASE("kronecker of identities is the identity")
{
    const CMat k = kronecker(CMat::Identity(2, 2), CMat::Identity(3, 3));
    CHECK((k - CMat::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("CP unfoldings satisfy the trilinear factor identities")
{
    std::mt19937_64 rng(25);

    // Small random dimensions plus the shape the pipeline produces.
    const std::vector<std::array<Index, 4>> cases = {
        {4, 5, 6, 2}, {7, 3, 5, 3}, {186, 222, 36, 4}};
    for (const auto& [di, dj, dk, k] : cases) {
        const CMat a = random_matrix(di, k, rng);
        const CMat b = random_matrix(dj, k, rng);
        const CMat c = random_matrix(dk, k, rng);
        const DenseTensor x = cp_tensor(a, b, c);

        const double n1 = (unfold(x, 0) - a * khatri_rao(b, c).transpose()).norm();
        const double n2 = (unfold(x, 1) - b * khatri_rao(c, a).transpose()).norm();
        const double n3 = (unfold(x, 2) - c * khatri_rao(a, b).transpose()).norm();
        const double ref = x.frobenius_norm();
        CHECK(n1 < 1e-12 * ref);
        CHECK(n2 < 1e-12 * ref);
        CHECK(n3 < 1e-12 * ref);
    }
}

TEST_CASE("unfold identity holds for higher orders on every mode")
{
    std::mt19937_64 rng(26);
    const DenseTensor x = random_tensor({2, 3, 2, 4, 3}, rng);
    for (Index n = 0; n < x.order(); ++n) {
        const CMat m = unfold(x, n);
        REQUIRE(m.rows() == x.dim(n));
        REQUIRE(m.cols() == x.size() / x.dim(n));
        // spot-check a few entries against the cyclic column convention
        std::mt19937_64 pick(n + 100);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<Index> idx(static_cast<std::size_t>(x.order()));
            for (Index d = 0; d < x.order(); ++d)
                idx[static_cast<std::size_t>(d)] =
                    static_cast<Index>(pick() % static_cast<std::uint64_t>(x.dim(d)));
            Index col = 0;
            for (Index step = 1; step < x.order(); ++step) {
                const Index mode = (n + step) % x.order();
                col = col * x.dim(mode) + idx[static_cast<std::size_t>(mode)];
            }
            CHECK(m(idx[static_cast<std::size_t>(n)], col) == x.at(idx));
        }
    }
}
