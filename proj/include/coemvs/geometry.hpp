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

#ifndef COEMVS_GEOMETRY_HPP
#define COEMVS_GEOMETRY_HPP

#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "common.hpp"

namespace coemvs {

enum class ArrayRole { transmit, receive };

/// Sparse coprime linear array on the half-wavelength integer grid.
///
/// positions is the sorted deduplicated union of the two uniform subarrays
/// {m1·k : 0 ≤ k ≤ m2−1} and {m2·k : 0 ≤ k ≤ 2·m1−1}.
struct SensorPositions {
    std::vector<int> positions;
    int m1 = 0;
    int m2 = 0;
    ArrayRole role = ArrayRole::transmit;

    Index count() const { return static_cast<Index>(positions.size()); }
};

/// Difference coarray of a sparse array: the full difference set, the pair
/// multiplicity of each lag, the maximal central contiguous segment [-h, h]
/// and the duplicate-averaging selection matrix restricted to that segment.
struct CoarraySpec {
    std::vector<int> diff_set;       // sorted, symmetric about 0
    std::map<int, int> weights;      // lag -> number of ordered sensor pairs
    int central_half_width = 0;      // h: central ULA covers [-h, h]
    std::vector<int> central_ula;    // the lags -h..h in ascending order
    RMat selection;                  // (2h+1) × |S|², rows sum to 1

    Index virtual_size() const { return static_cast<Index>(central_ula.size()); }
};

/// Builds the coprime array for a coprime pair (m1, m2), m1 < m2.
inline SensorPositions build_coprime_array(int m1, int m2, ArrayRole role) {
    if (m1 < 1 || m2 < 2 || m1 >= m2)
        throw parameter_error("coprime pair must satisfy 1 <= m1 < m2, m2 >= 2");
    if (std::gcd(m1, m2) != 1)
        throw parameter_error("array spacings must be coprime");

    std::set<int> pos;
    for (int k = 0; k <= m2 - 1; ++k) pos.insert(m1 * k);
    for (int k = 0; k <= 2 * m1 - 1; ++k) pos.insert(m2 * k);

    SensorPositions out;
    out.positions.assign(pos.begin(), pos.end());
    out.m1 = m1;
    out.m2 = m2;
    out.role = role;
    return out;
}

/// Selection matrix mapping the vectorized pairwise-product grid onto the
/// central contiguous coarray segment.
///
/// The vectorized index of the sensor pair (p, q) is p·|S|+q (p slowest,
/// matching the library-wide Kronecker convention in which the pair grid is
/// the flattening of a ∘ a*). Row i handles lag u_i = i − h and averages the
/// w(u_i) pairs with positions[q] − positions[p] = u_i, so that applied to
/// a(θ) ⊗ a*(θ) with element phases e^{−jπ·p·sinθ} it produces the contiguous
/// virtual-ULA steering vector [e^{jπ·u·sinθ}], u = −h..h. Lags outside the
/// contiguous segment are discarded.
inline RMat build_selection_matrix(const SensorPositions& arr, int half_width,
                                   const std::map<int, int>& weights) {
    const Index s = arr.count();
    const Index rows = 2 * static_cast<Index>(half_width) + 1;
    RMat sel = RMat::Zero(rows, s * s);
    for (Index p = 0; p < s; ++p) {
        for (Index q = 0; q < s; ++q) {
            const int lag = arr.positions[static_cast<std::size_t>(q)] -
                            arr.positions[static_cast<std::size_t>(p)];
            if (lag < -half_width || lag > half_width) continue;
            const Index row = static_cast<Index>(lag + half_width);
            sel(row, p * s + q) = 1.0 / weights.at(lag);
        }
    }
    return sel;
}

/// Computes the difference coarray, weight function, central contiguous
/// segment and selection matrix of a sparse array.
inline CoarraySpec difference_coarray(const SensorPositions& arr) {
    if (arr.positions.empty()) throw parameter_error("array must not be empty");

    CoarraySpec spec;
    for (int a : arr.positions)
        for (int b : arr.positions) ++spec.weights[a - b];
    for (const auto& [lag, w] : spec.weights) spec.diff_set.push_back(lag);

    int h = 0;
    while (spec.weights.count(h + 1) != 0) ++h;
    spec.central_half_width = h;
    for (int u = -h; u <= h; ++u) spec.central_ula.push_back(u);

    spec.selection = build_selection_matrix(arr, h, spec.weights);
    return spec;
}

/// Closed-form size of the central contiguous segment of the coprime coarray.
inline Index coprime_virtual_size(int m1, int m2) {
    return 2 * static_cast<Index>(m1) * m2 + 2 * static_cast<Index>(m1) + 1;
}

} // namespace coemvs

#endif // COEMVS_GEOMETRY_HPP
