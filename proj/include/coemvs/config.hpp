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

#ifndef COEMVS_CONFIG_HPP
#define COEMVS_CONFIG_HPP

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "emvs.hpp"

namespace coemvs {

/// Experiment description: scene, Monte Carlo controls, sweep grids and
/// solver overrides. Angles are degrees here (converted to radians when the
/// scene is instantiated).
struct RunConfig {
    int m1 = 3, m2 = 4;
    int n1 = 3, n2 = 5;

    std::vector<double> theta_t, phi_t, gamma_t, eta_t; // degrees, one entry per target
    std::vector<double> theta_r, phi_r, gamma_r, eta_r;
    std::vector<double> power; // empty: unit power for every target

    Index snapshots = 200;
    std::optional<double> snr_db = 10.0;
    bool exact_covariance = false;

    Index trials = 1;
    std::uint64_t base_seed = 0;

    std::vector<double> snr_sweep_db;
    std::vector<Index> snapshot_sweep;
    std::vector<Index> k_sweep;

    Index tals_max_iter = 500;
    double tals_tol = 1e-8;
    Index tals_restarts = 5;

    Index threads = 0; // 0: one worker per hardware thread

    Index k() const { return static_cast<Index>(theta_t.size()); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parameter_error("config key '" + key + "': cannot parse number '" + s + "'");
    }
}

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, key));
    }
    if (out.empty()) throw parameter_error("config key '" + key + "' has an empty list");
    return out;
}

inline std::vector<Index> parse_index_list(const std::string& s, const std::string& key) {
    std::vector<Index> out;
    for (double v : parse_list(s, key)) {
        if (v < 0 || v != std::floor(v))
            throw parameter_error("config key '" + key + "' must list non-negative integers");
        out.push_back(static_cast<Index>(v));
    }
    return out;
}

inline bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw parameter_error("config key '" + key + "': cannot parse boolean '" + s + "'");
}

template <typename T>
void require_monotone(const std::vector<T>& v, const std::string& key) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw parameter_error("config key '" + key + "' must be strictly increasing");
}

} // namespace detail

/// Parses the flat key=value configuration format ('#' starts a comment,
/// lists are comma separated, angles in degrees).
inline RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parameter_error("config line " + std::to_string(lineno) +
                                  " is not of the form key=value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parameter_error("config line " + std::to_string(lineno) +
                                  " has an empty key or value");
        if (!kv.emplace(key, value).second)
            throw parameter_error("config key '" + key + "' appears twice");
    }

    RunConfig cfg;
    cfg.snr_db.reset();
    for (const auto& [key, value] : kv) {
        if (key == "m1") cfg.m1 = static_cast<int>(detail::parse_double(value, key));
        else if (key == "m2") cfg.m2 = static_cast<int>(detail::parse_double(value, key));
        else if (key == "n1") cfg.n1 = static_cast<int>(detail::parse_double(value, key));
        else if (key == "n2") cfg.n2 = static_cast<int>(detail::parse_double(value, key));
        else if (key == "theta_t") cfg.theta_t = detail::parse_list(value, key);
        else if (key == "phi_t") cfg.phi_t = detail::parse_list(value, key);
        else if (key == "gamma_t") cfg.gamma_t = detail::parse_list(value, key);
        else if (key == "eta_t") cfg.eta_t = detail::parse_list(value, key);
        else if (key == "theta_r") cfg.theta_r = detail::parse_list(value, key);
        else if (key == "phi_r") cfg.phi_r = detail::parse_list(value, key);
        else if (key == "gamma_r") cfg.gamma_r = detail::parse_list(value, key);
        else if (key == "eta_r") cfg.eta_r = detail::parse_list(value, key);
        else if (key == "power") cfg.power = detail::parse_list(value, key);
        else if (key == "snapshots") cfg.snapshots = static_cast<Index>(detail::parse_double(value, key));
        else if (key == "snr_db") {
            if (value != "none") cfg.snr_db = detail::parse_double(value, key);
        } else if (key == "exact_covariance") cfg.exact_covariance = detail::parse_bool(value, key);
        else if (key == "trials") cfg.trials = static_cast<Index>(detail::parse_double(value, key));
        else if (key == "seed") cfg.base_seed = static_cast<std::uint64_t>(detail::parse_double(value, key));
        else if (key == "snr_sweep") cfg.snr_sweep_db = detail::parse_list(value, key);
        else if (key == "snapshot_sweep") cfg.snapshot_sweep = detail::parse_index_list(value, key);
        else if (key == "k_sweep") cfg.k_sweep = detail::parse_index_list(value, key);
        else if (key == "tals_max_iter") cfg.tals_max_iter = static_cast<Index>(detail::parse_double(value, key));
        else if (key == "tals_tol") cfg.tals_tol = detail::parse_double(value, key);
        else if (key == "tals_restarts") cfg.tals_restarts = static_cast<Index>(detail::parse_double(value, key));
        else if (key == "threads") cfg.threads = static_cast<Index>(detail::parse_double(value, key));
        else throw parameter_error("unknown config key '" + key + "'");
    }

    const Index k = cfg.k();
    if (k == 0) throw parameter_error("config must list at least one target (theta_t, ...)");
    for (const auto* list : {&cfg.phi_t, &cfg.gamma_t, &cfg.eta_t, &cfg.theta_r, &cfg.phi_r,
                             &cfg.gamma_r, &cfg.eta_r})
        if (static_cast<Index>(list->size()) != k)
            throw parameter_error("all eight angle lists must have the same length");
    if (!cfg.power.empty() && static_cast<Index>(cfg.power.size()) != k)
        throw parameter_error("power list must match the target count");
    if (cfg.trials < 1) throw parameter_error("trials must be >= 1");
    detail::require_monotone(cfg.snr_sweep_db, "snr_sweep");
    detail::require_monotone(cfg.snapshot_sweep, "snapshot_sweep");
    detail::require_monotone(cfg.k_sweep, "k_sweep");
    for (Index kk : cfg.k_sweep)
        if (kk < 1 || kk > k)
            throw parameter_error("k_sweep values must lie in [1, target count]");
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Instantiates the scene, optionally truncated to the first k_prefix targets
/// (used by the K sweep).
inline SceneConfig scene_from_config(const RunConfig& cfg,
                                     std::optional<Index> k_prefix = std::nullopt) {
    const Index k = k_prefix.value_or(cfg.k());
    if (k < 1 || k > cfg.k()) throw parameter_error("target prefix out of range");

    SceneConfig scene;
    scene.transmit = build_coprime_array(cfg.m1, cfg.m2, ArrayRole::transmit);
    scene.receive = build_coprime_array(cfg.n1, cfg.n2, ArrayRole::receive);
    scene.snapshots = cfg.snapshots;
    scene.snr_db = cfg.snr_db;
    scene.rng_seed = cfg.base_seed;
    scene.targets.reserve(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        const auto u = static_cast<std::size_t>(i);
        TargetParams t;
        t.theta_t = deg2rad(cfg.theta_t[u]);
        t.phi_t = deg2rad(cfg.phi_t[u]);
        t.gamma_t = deg2rad(cfg.gamma_t[u]);
        t.eta_t = deg2rad(cfg.eta_t[u]);
        t.theta_r = deg2rad(cfg.theta_r[u]);
        t.phi_r = deg2rad(cfg.phi_r[u]);
        t.gamma_r = deg2rad(cfg.gamma_r[u]);
        t.eta_r = deg2rad(cfg.eta_r[u]);
        t.power = cfg.power.empty() ? 1.0 : cfg.power[u];
        scene.targets.push_back(t);
    }
    validate_scene(scene);
    return scene;
}

} // namespace coemvs

#endif // COEMVS_CONFIG_HPP
