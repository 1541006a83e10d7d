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

#ifndef COEMVS_IO_HPP
#define COEMVS_IO_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "crb.hpp"
#include "harness.hpp"

namespace coemvs {

/// Round-trip decimal formatting; all emitted numbers go through this so a
/// repeated run with the same seed produces byte-identical files.
inline std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline bool json_requested(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open output file: " + path);
    return out;
}

} // namespace detail

// --- sweep reports ---------------------------------------------------------

inline void write_sweep_report_csv(const std::string& path, const RmseReport& report) {
    std::ofstream out = detail::open_out(path);
    out << report.sweep_name
        << ",rmse_angle_deg,rmse_polarization_deg,bias_angle_deg,bias_polarization_deg,"
           "failures,trials\n";
    for (const SweepPoint& pt : report.points) {
        out << fmt_num(pt.sweep_value) << ',' << fmt_num(pt.stats.rmse.angle_deg) << ','
            << fmt_num(pt.stats.rmse.polarization_deg) << ',' << fmt_num(pt.stats.bias_angle_deg)
            << ',' << fmt_num(pt.stats.bias_polarization_deg) << ',' << pt.stats.failures << ','
            << pt.stats.trials << '\n';
    }
    if (!out) throw io_error("failed writing output file: " + path);
}

inline void write_sweep_report_json(const std::string& path, const RmseReport& report) {
    nlohmann::ordered_json doc;
    doc["sweep"] = report.sweep_name;
    doc["points"] = nlohmann::ordered_json::array();
    for (const SweepPoint& pt : report.points) {
        nlohmann::ordered_json p;
        p[report.sweep_name] = pt.sweep_value;
        p["rmse_angle_deg"] = pt.stats.rmse.angle_deg;
        p["rmse_polarization_deg"] = pt.stats.rmse.polarization_deg;
        p["bias_angle_deg"] = pt.stats.bias_angle_deg;
        p["bias_polarization_deg"] = pt.stats.bias_polarization_deg;
        p["failures"] = pt.stats.failures;
        p["trials"] = pt.stats.trials;
        doc["points"].push_back(std::move(p));
    }
    std::ofstream out = detail::open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw io_error("failed writing output file: " + path);
}

inline void write_sweep_report(const std::string& path, const RmseReport& report) {
    if (json_requested(path)) write_sweep_report_json(path, report);
    else write_sweep_report_csv(path, report);
}

/// Combined bias study over one or more sweep grids; the first column names
/// the grid each row belongs to.
inline void write_bias_report(const std::string& path,
                              const std::vector<std::pair<std::string, RmseReport>>& reports) {
    if (json_requested(path)) {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& [name, report] : reports) {
            for (const SweepPoint& pt : report.points) {
                nlohmann::ordered_json p;
                p["sweep"] = name;
                p["value"] = pt.sweep_value;
                p["bias_angle_deg"] = pt.stats.bias_angle_deg;
                p["bias_polarization_deg"] = pt.stats.bias_polarization_deg;
                p["rmse_angle_deg"] = pt.stats.rmse.angle_deg;
                p["rmse_polarization_deg"] = pt.stats.rmse.polarization_deg;
                p["failures"] = pt.stats.failures;
                p["trials"] = pt.stats.trials;
                doc.push_back(std::move(p));
            }
        }
        std::ofstream out = detail::open_out(path);
        out << doc.dump(2) << '\n';
        if (!out) throw io_error("failed writing output file: " + path);
        return;
    }
    std::ofstream out = detail::open_out(path);
    out << "sweep,value,bias_angle_deg,bias_polarization_deg,rmse_angle_deg,"
           "rmse_polarization_deg,failures,trials\n";
    for (const auto& [name, report] : reports) {
        for (const SweepPoint& pt : report.points) {
            out << name << ',' << fmt_num(pt.sweep_value) << ','
                << fmt_num(pt.stats.bias_angle_deg) << ','
                << fmt_num(pt.stats.bias_polarization_deg) << ','
                << fmt_num(pt.stats.rmse.angle_deg) << ','
                << fmt_num(pt.stats.rmse.polarization_deg) << ',' << pt.stats.failures << ','
                << pt.stats.trials << '\n';
        }
    }
    if (!out) throw io_error("failed writing output file: " + path);
}

// --- per-trial estimates (scatter output) -----------------------------------

inline void write_trials_csv(const std::string& path, const std::vector<TargetParams>& truth,
                             const std::vector<TrialResult>& trials) {
    std::ofstream out = detail::open_out(path);
    out << "trial,target,ok,error";
    for (const char* n : {"theta_t", "phi_t", "gamma_t", "eta_t", "theta_r", "phi_r", "gamma_r",
                          "eta_r"})
        out << ",est_" << n << "_deg";
    for (const char* n : {"theta_t", "phi_t", "gamma_t", "eta_t", "theta_r", "phi_r", "gamma_r",
                          "eta_r"})
        out << ",true_" << n << "_deg";
    out << '\n';

    for (std::size_t trial = 0; trial < trials.size(); ++trial) {
        const TrialResult& tr = trials[trial];
        if (!tr.success) {
            out << trial << ",-1,0," << tr.error_category;
            for (int i = 0; i < 16; ++i) out << ',';
            out << '\n';
            continue;
        }
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const TargetEstimate& e = tr.estimates[t];
            const TargetParams& g = truth[t];
            out << trial << ',' << t << ",1,";
            for (double v : {e.theta_t, e.phi_t, e.gamma_t, e.eta_t, e.theta_r, e.phi_r,
                             e.gamma_r, e.eta_r})
                out << ',' << fmt_num(rad2deg(v));
            for (double v : {g.theta_t, g.phi_t, g.gamma_t, g.eta_t, g.theta_r, g.phi_r,
                             g.gamma_r, g.eta_r})
                out << ',' << fmt_num(rad2deg(v));
            out << '\n';
        }
    }
    if (!out) throw io_error("failed writing output file: " + path);
}

inline void write_trials_json(const std::string& path, const std::vector<TargetParams>& truth,
                              const std::vector<TrialResult>& trials) {
    nlohmann::ordered_json doc;
    doc["trials"] = nlohmann::ordered_json::array();
    for (std::size_t trial = 0; trial < trials.size(); ++trial) {
        const TrialResult& tr = trials[trial];
        nlohmann::ordered_json jt;
        jt["trial"] = trial;
        jt["ok"] = tr.success;
        if (!tr.success) {
            jt["error"] = tr.error_category;
        } else {
            jt["targets"] = nlohmann::ordered_json::array();
            for (std::size_t t = 0; t < truth.size(); ++t) {
                const TargetEstimate& e = tr.estimates[t];
                const TargetParams& g = truth[t];
                nlohmann::ordered_json rec;
                rec["target"] = t;
                const char* names[8] = {"theta_t", "phi_t", "gamma_t", "eta_t",
                                        "theta_r", "phi_r", "gamma_r", "eta_r"};
                const double est[8] = {e.theta_t, e.phi_t, e.gamma_t, e.eta_t,
                                       e.theta_r, e.phi_r, e.gamma_r, e.eta_r};
                const double tru[8] = {g.theta_t, g.phi_t, g.gamma_t, g.eta_t,
                                       g.theta_r, g.phi_r, g.gamma_r, g.eta_r};
                for (int i = 0; i < 8; ++i) {
                    rec[std::string("est_") + names[i] + "_deg"] = rad2deg(est[i]);
                    rec[std::string("true_") + names[i] + "_deg"] = rad2deg(tru[i]);
                }
                jt["targets"].push_back(std::move(rec));
            }
        }
        doc["trials"].push_back(std::move(jt));
    }
    std::ofstream out = detail::open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw io_error("failed writing output file: " + path);
}

inline void write_trials(const std::string& path, const std::vector<TargetParams>& truth,
                         const std::vector<TrialResult>& trials) {
    if (json_requested(path)) write_trials_json(path, truth, trials);
    else write_trials_csv(path, truth, trials);
}

// --- CRB --------------------------------------------------------------------

inline void write_crb_csv(const std::string& path, const CrbResult& crb, Index k) {
    std::ofstream out = detail::open_out(path);
    out << "family,target,crb_rad2,sqrt_crb_deg\n";
    for (Index f = 0; f < 8; ++f) {
        for (Index t = 0; t < k; ++t) {
            const double v = crb.matrix(f * k + t, f * k + t);
            out << param_family_names[static_cast<std::size_t>(f)] << ',' << t << ','
                << fmt_num(v) << ',' << fmt_num(rad2deg(std::sqrt(std::max(v, 0.0)))) << '\n';
        }
    }
    if (!out) throw io_error("failed writing output file: " + path);
}

inline void write_crb_json(const std::string& path, const CrbResult& crb, Index k) {
    nlohmann::ordered_json doc;
    doc["sigma2"] = crb.sigma2;
    doc["snapshots"] = crb.snapshots;
    doc["diagonal"] = nlohmann::ordered_json::array();
    for (Index f = 0; f < 8; ++f)
        for (Index t = 0; t < k; ++t) {
            const double v = crb.matrix(f * k + t, f * k + t);
            nlohmann::ordered_json rec;
            rec["family"] = param_family_names[static_cast<std::size_t>(f)];
            rec["target"] = t;
            rec["crb_rad2"] = v;
            rec["sqrt_crb_deg"] = rad2deg(std::sqrt(std::max(v, 0.0)));
            doc["diagonal"].push_back(std::move(rec));
        }
    std::ofstream out = detail::open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw io_error("failed writing output file: " + path);
}

inline void write_crb(const std::string& path, const CrbResult& crb, Index k) {
    if (json_requested(path)) write_crb_json(path, crb, k);
    else write_crb_csv(path, crb, k);
}

// --- raw snapshots -----------------------------------------------------------

/// Snapshot matrix as CSV: one row per channel, cells "re|im" separated by
/// commas, preceded by a header recording the dimensions.
inline void write_snapshots_csv(const std::string& path, const SnapshotMatrix& y) {
    std::ofstream out = detail::open_out(path);
    out << "# channels=" << y.y.rows() << " snapshots=" << y.y.cols() << '\n';
    for (Index r = 0; r < y.y.rows(); ++r) {
        for (Index c = 0; c < y.y.cols(); ++c) {
            if (c) out << ',';
            out << fmt_num(y.y(r, c).real()) << '|' << fmt_num(y.y(r, c).imag());
        }
        out << '\n';
    }
    if (!out) throw io_error("failed writing output file: " + path);
}

} // namespace coemvs

#endif // COEMVS_IO_HPP
