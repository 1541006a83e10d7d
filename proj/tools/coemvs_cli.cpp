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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coemvs/coemvs.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<coemvs::Index> threads;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file (key=value)")
        ->required();
    cmd->add_option("--out", args.out_path, "output file (.csv, or .json where supported)")
        ->required();
    cmd->add_option("--seed", args.seed, "override the config base seed");
    cmd->add_option("--threads", args.threads, "override the config worker count");
}

coemvs::RunConfig load(const CommonArgs& args) {
    coemvs::RunConfig cfg = coemvs::load_config(args.config_path);
    if (args.seed) cfg.base_seed = *args.seed;
    if (args.threads) cfg.threads = *args.threads;
    return cfg;
}

void log_sweep(const coemvs::RmseReport& report) {
    for (const coemvs::SweepPoint& pt : report.points) {
        std::cerr << "[coemvs] " << report.sweep_name << '=' << pt.sweep_value
                  << " trials=" << pt.stats.trials << " failures=" << pt.stats.failures
                  << " rmse_angle=" << pt.stats.rmse.angle_deg
                  << " rmse_pol=" << pt.stats.rmse.polarization_deg << " wall=" << pt.wall_seconds
                  << "s\n";
    }
}

int exit_code_for(const coemvs::error& e) {
    const std::string& c = e.category();
    if (c == "parameter") return 2;
    if (c == "identifiability") return 3;
    if (c == "io") return 5;
    return 4; // numeric / degenerate / out-of-range
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"difference-coarray tensor estimation for bistatic coprime EMVS-MIMO radar"};
    app.require_subcommand(1);

    CommonArgs sim_args, est_args, snr_args, snap_args, k_args, bias_args, crb_args;

    CLI::App* sim = app.add_subcommand("simulate", "generate synthetic snapshots and dump them");
    add_common(sim, sim_args);

    CLI::App* est = app.add_subcommand(
        "estimate", "run the full pipeline for the configured trial count, dump per-target estimates");
    add_common(est, est_args);

    CLI::App* ssnr = app.add_subcommand("sweep-snr", "Monte Carlo RMSE versus SNR");
    add_common(ssnr, snr_args);

    CLI::App* ssnap = app.add_subcommand("sweep-snapshots", "Monte Carlo RMSE versus snapshot count");
    add_common(ssnap, snap_args);

    CLI::App* sk = app.add_subcommand("sweep-k", "Monte Carlo RMSE versus target count");
    add_common(sk, k_args);

    CLI::App* bias = app.add_subcommand(
        "bias", "estimation bias over the configured SNR and/or snapshot grids");
    add_common(bias, bias_args);

    CLI::App* crb = app.add_subcommand("crb", "Cramer-Rao bound of the configured scene");
    add_common(crb, crb_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const coemvs::RunConfig cfg = load(sim_args);
            coemvs::SceneConfig scene = coemvs::scene_from_config(cfg);
            scene.rng_seed = cfg.base_seed;
            coemvs::write_snapshots_csv(sim_args.out_path, coemvs::generate_snapshots(scene));
        } else if (est->parsed()) {
            const coemvs::RunConfig cfg = load(est_args);
            const coemvs::SceneConfig scene = coemvs::scene_from_config(cfg);
            const std::vector<coemvs::TrialResult> trials =
                coemvs::run_trials(cfg, cfg.trials);
            coemvs::Index failures = 0;
            for (const auto& t : trials) failures += t.success ? 0 : 1;
            std::cerr << "[coemvs] estimate trials=" << trials.size() << " failures=" << failures
                      << "\n";
            coemvs::write_trials(est_args.out_path, scene.targets, trials);
        } else if (ssnr->parsed()) {
            const coemvs::RunConfig cfg = load(snr_args);
            const coemvs::RmseReport report = coemvs::run_sweep(cfg, coemvs::SweepKind::snr);
            log_sweep(report);
            coemvs::write_sweep_report(snr_args.out_path, report);
        } else if (ssnap->parsed()) {
            const coemvs::RunConfig cfg = load(snap_args);
            const coemvs::RmseReport report =
                coemvs::run_sweep(cfg, coemvs::SweepKind::snapshots);
            log_sweep(report);
            coemvs::write_sweep_report(snap_args.out_path, report);
        } else if (sk->parsed()) {
            const coemvs::RunConfig cfg = load(k_args);
            const coemvs::RmseReport report = coemvs::run_sweep(cfg, coemvs::SweepKind::targets);
            log_sweep(report);
            coemvs::write_sweep_report(k_args.out_path, report);
        } else if (bias->parsed()) {
            const coemvs::RunConfig cfg = load(bias_args);
            std::vector<std::pair<std::string, coemvs::RmseReport>> reports;
            if (!cfg.snr_sweep_db.empty()) {
                reports.emplace_back("snr_db", coemvs::run_sweep(cfg, coemvs::SweepKind::snr));
                log_sweep(reports.back().second);
            }
            if (!cfg.snapshot_sweep.empty()) {
                reports.emplace_back("snapshots",
                                     coemvs::run_sweep(cfg, coemvs::SweepKind::snapshots));
                log_sweep(reports.back().second);
            }
            if (reports.empty())
                throw coemvs::parameter_error(
                    "bias needs snr_sweep and/or snapshot_sweep in the config");
            coemvs::write_bias_report(bias_args.out_path, reports);
        } else if (crb->parsed()) {
            const coemvs::RunConfig cfg = load(crb_args);
            const coemvs::SceneConfig scene = coemvs::scene_from_config(cfg);
            const coemvs::CrbResult result = coemvs::crb_matrix(scene);
            coemvs::write_crb(crb_args.out_path, result, scene.k());
        }
    } catch (const coemvs::error& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
