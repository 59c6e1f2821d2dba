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

#ifndef SSAC_EXPERIMENT_HPP
#define SSAC_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssac/config.hpp"
#include "ssac/gate.hpp"

namespace ssac {

struct SeedRun {
    RunConfig config;
    bool vanilla = false;
    /// Pretrained gate and its dataset; when absent an SSAC run pretrains its own.
    std::optional<Mlp> gate;
    std::span<const GateSample> gate_data;
};

struct SeedResult {
    std::uint64_t seed = 0;
    long episodes = 0;
    /// Trailing 100-episode means.
    double final_return = 0.0;
    double final_success_rate = 0.0;
    bool failed = false;
    std::string error;
};

/**
 * One training run written to dir: config.json, train_log.csv,
 * checkpoint_<steps>.json, final.json and, when the gate is pretrained here,
 * gate_pretrained.json. A TrainingError is caught and recorded in
 * failure.txt with failure_checkpoint.json.
 */
SeedResult run_seed(const SeedRun& run, const std::filesystem::path& dir,
                    const std::function<void(const std::string&)>& progress = {});

/// summary.csv: one row per seed plus mean and std rows of the final returns
/// over seeds that finished.
void write_summary(const std::filesystem::path& path, std::span<const SeedResult> results);

}  // namespace ssac

#endif  // SSAC_EXPERIMENT_HPP
