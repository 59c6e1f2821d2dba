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

#include "ssac/experiment.hpp"

#include <cstdio>
#include <fstream>

#include "ssac/artifacts.hpp"
#include "ssac/checkpoint.hpp"
#include "ssac/csv.hpp"
#include "ssac/evaluation.hpp"
#include "ssac/trainer.hpp"

namespace ssac {

namespace fs = std::filesystem;

namespace {

void write_failure(const fs::path& dir, const Trainer& trainer, const LogRow& last, const std::exception& e) {
    std::ofstream f(dir / "failure.txt");
    f << "error: " << e.what() << "\n";
    f << "last log row:";
    for (const auto& field : training_log_fields(last)) f << ' ' << field;
    f << "\nupdate events: " << trainer.update_events() << "\nsac adam steps: " << trainer.sac_adam_steps() << "\n";
    save_checkpoint(make_checkpoint(trainer, last.env_steps), dir / "failure_checkpoint.json");
}

std::string seed_prefix(std::uint64_t seed) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "seed %llu", static_cast<unsigned long long>(seed));
    return buf;
}

}  // namespace

SeedResult run_seed(const SeedRun& run, const fs::path& dir, const std::function<void(const std::string&)>& progress) {
    const RunConfig& cfg = run.config;
    const std::string prefix = seed_prefix(cfg.schedule.seed);
    auto report = [&](const std::string& msg) {
        if (progress) progress(prefix + "  " + msg);
    };
    fs::create_directories(dir);
    save_run_config(cfg, dir / "config.json");

    Trainer trainer(cfg, {run.vanilla});
    if (!run.vanilla) {
        if (run.gate) {
            trainer.set_gate(*run.gate);
            trainer.import_gate_dataset(run.gate_data);
        } else {
            report("pretraining gate");
            trainer.pretrain_gate();
            save_checkpoint(make_gate_checkpoint(cfg, trainer.gate()), dir / "gate_pretrained.json");
        }
    }

    SeedResult result;
    result.seed = cfg.schedule.seed;
    CsvWriter log(dir / "train_log.csv", training_log_columns());
    std::vector<double> returns;
    std::vector<double> successes;
    LogRow last;
    try {
        trainer.train(
            [&](const LogRow& row) {
                log.row(training_log_fields(row));
                returns.push_back(row.episode_return);
                successes.push_back(row.success ? 1.0 : 0.0);
                last = row;
                if (row.episode % 500 == 0) {
                    char buf[96];
                    std::snprintf(buf, sizeof buf, "episode %ld  steps %ld  trailing return %.2f", row.episode,
                                  row.env_steps, trailing_mean(returns, 100));
                    report(buf);
                }
            },
            [&](long steps) {
                log.flush();
                save_checkpoint(make_checkpoint(trainer, steps), dir / ("checkpoint_" + std::to_string(steps) + ".json"));
            });
    } catch (const TrainingError& e) {
        log.flush();
        write_failure(dir, trainer, last, e);
        result.failed = true;
        result.error = e.what();
    }
    log.flush();
    if (!result.failed) save_checkpoint(make_checkpoint(trainer, last.env_steps), dir / "final.json");
    result.episodes = static_cast<long>(returns.size());
    result.final_return = trailing_mean(returns, 100);
    result.final_success_rate = trailing_mean(successes, 100);
    return result;
}

void write_summary(const fs::path& path, std::span<const SeedResult> results) {
    CsvWriter summary(path, {"seed", "episodes", "final_return", "final_success_rate"});
    std::vector<double> finals;
    for (const SeedResult& r : results) {
        if (r.failed) {
            summary.row({std::to_string(r.seed), std::to_string(r.episodes), "failed", ""});
            continue;
        }
        finals.push_back(r.final_return);
        summary.row({std::to_string(r.seed), std::to_string(r.episodes), format_double(r.final_return),
                     format_double(r.final_success_rate)});
    }
    const MeanStd ms = mean_std(finals);
    summary.row({"mean", "", format_double(ms.mean), ""});
    summary.row({"std", "", format_double(ms.std), ""});
}

}  // namespace ssac
