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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "ssac/artifacts.hpp"
#include "ssac/checkpoint.hpp"
#include "ssac/csv.hpp"
#include "ssac/experiment.hpp"

namespace fs = std::filesystem;
using namespace ssac;

namespace {

RunConfig tiny_config() {
    RunConfig cfg;
    cfg.schedule.gate_pretrain_steps = 2000;
    cfg.schedule.joint_steps = 2000;
    cfg.schedule.exploration_steps = 1000;
    cfg.schedule.checkpoint_every = 1000;
    cfg.gate.update_period = 1000;
    cfg.sac.replay_batch = 128;
    cfg.sac.updates_per_event = 1;
    return cfg;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ssac_experiment_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(RunSeed, WritesRunArtifacts) {
    const fs::path dir = fresh_dir("artifacts");
    const SeedResult r = run_seed({tiny_config(), false, std::nullopt, {}}, dir);
    EXPECT_FALSE(r.failed);
    EXPECT_EQ(r.episodes, 40);
    for (const char* name : {"config.json", "train_log.csv", "gate_pretrained.json", "checkpoint_1000.json",
                             "checkpoint_2000.json", "final.json"}) {
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    }
    const CsvTable log = read_csv(dir / "train_log.csv");
    ASSERT_EQ(log.rows.size(), 40u);
    double sum = 0.0;
    for (std::size_t i = 0; i < log.rows.size(); ++i) sum += parse_training_log_row(log, i).episode_return;
    EXPECT_NEAR(r.final_return, sum / 40.0, 1e-9);
    EXPECT_EQ(load_checkpoint(dir / "final.json").env_steps, 2000);
    EXPECT_EQ(load_run_config(dir / "config.json").schedule.joint_steps, 2000);
    fs::remove_all(dir);
}

TEST(RunSeed, ReproducibleAndUsesGivenGate) {
    const fs::path a = fresh_dir("a"), b = fresh_dir("b"), c = fresh_dir("c");
    run_seed({tiny_config(), false, std::nullopt, {}}, a);
    run_seed({tiny_config(), false, std::nullopt, {}}, b);
    EXPECT_EQ(bytes(a / "train_log.csv"), bytes(b / "train_log.csv"));

    Rng rng(3);
    const Mlp gate = make_gate_network(rng);
    run_seed({tiny_config(), false, gate, {}}, c);
    EXPECT_FALSE(fs::exists(c / "gate_pretrained.json"));
    for (const fs::path& d : {a, b, c}) fs::remove_all(d);
}

TEST(RunSeed, VanillaHasNoGateArtifacts) {
    const fs::path dir = fresh_dir("vanilla");
    const SeedResult r = run_seed({tiny_config(), true, std::nullopt, {}}, dir);
    EXPECT_FALSE(r.failed);
    EXPECT_FALSE(fs::exists(dir / "gate_pretrained.json"));
    EXPECT_TRUE(load_checkpoint(dir / "final.json").vanilla);
    const CsvTable log = read_csv(dir / "train_log.csv");
    for (std::size_t i = 0; i < log.rows.size(); ++i) EXPECT_EQ(parse_training_log_row(log, i).gate_engaged_steps, 0);
    fs::remove_all(dir);
}

TEST(Summary, MeanAndSampleStdOverFinishedSeeds) {
    const fs::path dir = fresh_dir("summary");
    fs::create_directories(dir);
    const SeedResult rs[] = {{0, 10, 80.0, 0.5, false, ""}, {1, 10, 90.0, 0.7, false, ""}, {2, 3, 0.0, 0.0, true, "x"}};
    write_summary(dir / "summary.csv", rs);
    const CsvTable t = read_csv(dir / "summary.csv");
    ASSERT_EQ(t.rows.size(), 5u);
    EXPECT_EQ(t.rows[2][2], "failed");
    EXPECT_EQ(t.rows[3][0], "mean");
    EXPECT_DOUBLE_EQ(std::stod(t.rows[3][2]), 85.0);
    EXPECT_NEAR(std::stod(t.rows[4][2]), std::sqrt(50.0), 1e-12);
    fs::remove_all(dir);
}
