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

#ifndef COEMVS_COMMON_HPP
#define COEMVS_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace coemvs {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double pi = std::numbers::pi;
inline constexpr cxd j1c{0.0, 1.0};

inline double deg2rad(double d) { return d * pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / pi; }

/// Base class of all library errors. `category()` is a stable machine-readable
/// tag used by the CLI to derive exit codes.
class error : public std::runtime_error {
public:
    error(std::string category, const std::string& what)
        : std::runtime_error(what), category_(std::move(category)) {}
    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

/// Invalid argument or configuration value.
struct parameter_error : error {
    explicit parameter_error(const std::string& what) : error("parameter", what) {}
};

/// Requested source count exceeds what the decomposition can resolve.
struct identifiability_error : error {
    explicit identifiability_error(const std::string& what) : error("identifiability", what) {}
};

/// Numerically degenerate input (rank deficiency, singular solve, ...).
struct numeric_error : error {
    explicit numeric_error(const std::string& what) : error("numeric", what) {}
};

/// A quantity left its admissible domain (angle outside [0, pi/2), ...).
struct out_of_range_error : error {
    explicit out_of_range_error(const std::string& what) : error("out_of_range", what) {}
};

/// File / stream failure, annotated with the offending path.
struct io_error : error {
    explicit io_error(const std::string& what) : error("io", what) {}
};

/// splitmix64 step; used to derive independent sub-seeds from one master seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace coemvs

#endif // COEMVS_COMMON_HPP
