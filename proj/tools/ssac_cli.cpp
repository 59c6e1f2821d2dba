/*
 Copyright 2026 The ssac Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Command-line entry point: gate pretraining, training, rollout traces and
// balance-map sweeps.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ssac/artifacts.hpp"
#include "ssac/checkpoint.hpp"
#include "ssac/config.hpp"
#include "ssac/csv.hpp"
#include "ssac/evaluation.hpp"
#include "ssac/experiment.hpp"
#include "ssac/trainer.hpp"

namespace fs = std::filesystem;
using namespace ssac;

namespace {

RunConfig load_config(const std::string& path, std::optional<long> seed) {
    RunConfig cfg = path.empty() ? RunConfig{} : load_run_config(path);
    if (seed) cfg.schedule.seed = static_cast<std::uint64_t>(*seed);
    cfg.validate();
    return cfg;
}

void print_gate_metrics(const GateMetrics& m) {
    std::printf("held-out samples %ld  positives %ld\n", m.samples(), m.true_pos + m.false_neg);
    std::printf("precision %.4f  recall %.4f  engage false-positive rate %.4f\n", m.precision(), m.recall(),
                m.engage_false_positive_rate());
}

struct PretrainArgs {
    std::string config;
    std::optional<long> seed;
    std::string out = "gate_out";
    int eval_episodes = 2000;
    int eval_stride = 5;
};

int cmd_pretrain_gate(const PretrainArgs& args) {
    const RunConfig cfg = load_config(args.config, args.seed);
    fs::create_directories(args.out);
    Trainer trainer(cfg);
    const PretrainProgress p = trainer.pretrain_gate([](const PretrainProgress& prog) {
        std::printf("steps %ld  episodes %ld  positive episodes %ld  gate loss %s\n", prog.steps, prog.episodes,
                    prog.positive_episodes,
                    prog.last_epoch.skipped ? "skipped" : format_double(prog.last_epoch.mean_loss).c_str());
        std::fflush(stdout);
    });
    save_checkpoint(make_gate_checkpoint(cfg, trainer.gate()), fs::path(args.out) / "gate.json");
    write_gate_dataset(fs::path(args.out) / "gate_dataset.csv", trainer.store().gate().items());
    std::printf("pretraining done: %ld episodes, %ld positive\n", p.episodes, p.positive_episodes);

    Rng eval_rng(cfg.schedule.seed + 0x9e3779b97f4a7c15ULL);
    print_gate_metrics(evaluate_gate(trainer.gate(), cfg.gate, cfg.balance_controller(), cfg.dynamics, cfg.goal,
                                     args.eval_episodes, args.eval_stride, eval_rng));
    return 0;
}

struct TrainArgs {
    std::string config;
    std::optional<long> seed;
    std::string out = "train_out";
    std::string gate;
    std::string gate_dataset;
    bool vanilla = false;
    int seeds = 1;
};

int cmd_train(const TrainArgs& args) {
    const RunConfig base = load_config(args.config, args.seed);
    const fs::path out(args.out);
    fs::create_directories(out);

    std::optional<Mlp> gate;
    std::vector<GateSample> gate_data;
    if (!args.vanilla && !args.gate.empty()) {
        const Checkpoint ckpt = load_checkpoint(args.gate);
        if (!ckpt.gate) throw std::runtime_error("gate checkpoint has no gate network: " + args.gate);
        gate = *ckpt.gate;
        if (!args.gate_dataset.empty()) gate_data = read_gate_dataset(args.gate_dataset);
    }

    std::vector<SeedResult> results;
    for (int k = 0; k < args.seeds; ++k) {
        RunConfig cfg = base;
        cfg.schedule.seed = base.schedule.seed + static_cast<std::uint64_t>(k);
        const SeedRun run{cfg, args.vanilla, gate, gate_data};
        const SeedResult r = run_seed(run, out / ("seed_" + std::to_string(cfg.schedule.seed)),
                                      [](const std::string& msg) {
                                          std::printf("%s\n", msg.c_str());
                                          std::fflush(stdout);
                                      });
        if (r.failed) {
            std::fprintf(stderr, "seed %llu failed: %s\n", static_cast<unsigned long long>(r.seed), r.error.c_str());
        } else {
            std::printf("seed %llu  final return %.3f\n", static_cast<unsigned long long>(r.seed), r.final_return);
        }
        results.push_back(r);
    }
    write_summary(out / "summary.csv", results);
    std::vector<double> finals;
    int failures = 0;
    for (const SeedResult& r : results) {
        if (r.failed) ++failures;
        else finals.push_back(r.final_return);
    }
    const MeanStd ms = mean_std(finals);
    std::printf("final return %.3f +- %.3f over %zu seeds\n", ms.mean, ms.std, finals.size());
    return failures > 0 ? 2 : 0;
}

State parse_state(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) v.push_back(std::stod(field));
    if (v.size() != 4) throw std::runtime_error("--init expects four comma-separated values");
    return {v[0], v[1], v[2], v[3]};
}

struct RolloutArgs {
    std::string checkpoint;
    std::string init = "-1.5707963267948966,0,0,0";
    bool deterministic = false;
    long seed = 0;
    std::string out = "trace.csv";
};

int cmd_rollout(const RolloutArgs& args) {
    const Checkpoint ckpt = load_checkpoint(args.checkpoint);
    const Agent agent = agent_from_checkpoint(ckpt);
    Rng rng(static_cast<std::uint64_t>(args.seed));
    const EpisodeRecord ep =
        do_rollout(agent, parse_state(args.init), args.deterministic ? RolloutMode::kDeterministic : RolloutMode::kStochastic,
                   ckpt.config.dynamics, ckpt.config.goal, rng);
    write_trace(args.out, ep, ckpt.config.dynamics.dt_ctrl);
    std::printf("return %.3f  success %d  gate engaged steps %d\n", ep.episode_return, ep.success ? 1 : 0,
                ep.engaged_steps());
    return 0;
}

struct BalanceMapArgs {
    std::string checkpoint;
    std::optional<int> n1;
    std::optional<int> n2;
    bool lqr_only = false;
    std::string out = "balance_map.csv";
};

int cmd_balance_map(const BalanceMapArgs& args) {
    const Checkpoint ckpt = load_checkpoint(args.checkpoint);
    const Agent agent = agent_from_checkpoint(ckpt, args.lqr_only);
    BalanceMapSpec spec = ckpt.config.balance_map;
    if (args.n1) spec.n_theta1 = *args.n1;
    if (args.n2) spec.n_theta2 = *args.n2;
    const auto cells = balance_map(agent, spec, ckpt.config.dynamics, ckpt.config.goal);
    write_balance_map(args.out, cells);
    std::printf("success rate %.4f over %zu cells\n", success_rate(cells), cells.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Switched soft actor critic for the acrobot"};
    app.require_subcommand(1);

    PretrainArgs pre;
    auto* pre_cmd = app.add_subcommand("pretrain-gate", "Fit the gate on balance-controller episodes");
    pre_cmd->add_option("--config", pre.config, "Run config JSON");
    pre_cmd->add_option("--seed", pre.seed, "Override the config seed");
    pre_cmd->add_option("--out", pre.out, "Output directory")->capture_default_str();
    pre_cmd->add_option("--eval-episodes", pre.eval_episodes, "Held-out episodes")->capture_default_str();
    pre_cmd->add_option("--eval-stride", pre.eval_stride, "Held-out decision stride")->capture_default_str();

    TrainArgs tr;
    auto* tr_cmd = app.add_subcommand("train", "Joint training; pretrains the gate per seed unless --gate is given");
    tr_cmd->add_option("--config", tr.config, "Run config JSON");
    tr_cmd->add_option("--seed", tr.seed, "First seed (overrides the config seed)");
    tr_cmd->add_option("--seeds", tr.seeds, "Number of consecutive seeds")->capture_default_str()->check(
        CLI::PositiveNumber);
    tr_cmd->add_option("--out", tr.out, "Output directory")->capture_default_str();
    tr_cmd->add_option("--gate", tr.gate, "Pretrained gate checkpoint")->check(CLI::ExistingFile);
    tr_cmd->add_option("--gate-dataset", tr.gate_dataset, "Gate dataset CSV saved with the checkpoint")
        ->check(CLI::ExistingFile);
    tr_cmd->add_flag("--vanilla-sac", tr.vanilla, "Plain SAC: no gate, balance controller or success buffer");

    RolloutArgs ro;
    auto* ro_cmd = app.add_subcommand("rollout", "Record one episode as a trace CSV");
    ro_cmd->add_option("--checkpoint", ro.checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
    ro_cmd->add_option("--init", ro.init, "Initial state theta1,theta2,dtheta1,dtheta2")->capture_default_str();
    ro_cmd->add_flag("--deterministic", ro.deterministic, "Act with the policy mean");
    ro_cmd->add_option("--seed", ro.seed, "Action noise seed")->capture_default_str();
    ro_cmd->add_option("--out", ro.out, "Trace CSV")->capture_default_str();

    BalanceMapArgs bm;
    auto* bm_cmd = app.add_subcommand("balance-map", "Deterministic episodes over a grid of initial angles");
    bm_cmd->add_option("--checkpoint", bm.checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
    bm_cmd->add_option("--n1", bm.n1, "theta1 grid points")->check(CLI::Range(2, 100000));
    bm_cmd->add_option("--n2", bm.n2, "theta2 grid points")->check(CLI::Range(2, 100000));
    bm_cmd->add_flag("--lqr-only", bm.lqr_only, "Balance controller from the first step");
    bm_cmd->add_option("--out", bm.out, "Map CSV")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*pre_cmd) return cmd_pretrain_gate(pre);
        if (*tr_cmd) return cmd_train(tr);
        if (*ro_cmd) return cmd_rollout(ro);
        if (*bm_cmd) return cmd_balance_map(bm);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
