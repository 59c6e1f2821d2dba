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

#ifndef SSAC_ARTIFACTS_HPP
#define SSAC_ARTIFACTS_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ssac/csv.hpp"
#include "ssac/evaluation.hpp"
#include "ssac/replay.hpp"
#include "ssac/trainer.hpp"

namespace ssac {

// CSV schemas of the files written by the command-line tool.

const std::vector<std::string>& training_log_columns();
std::vector<std::string> training_log_fields(const LogRow& row);
LogRow parse_training_log_row(const CsvTable& table, std::size_t i);

void write_gate_dataset(const std::filesystem::path& path, std::span<const GateSample> samples);
std::vector<GateSample> read_gate_dataset(const std::filesystem::path& path);

/// One row per state s_0 .. s_N at time t * dt_ctrl. The final state has no
/// action, so its torque is nan and its gate column repeats the last decision.
void write_trace(const std::filesystem::path& path, const EpisodeRecord& episode, double dt_ctrl);

void write_balance_map(const std::filesystem::path& path, std::span<const BalanceCell> cells);
std::vector<BalanceCell> read_balance_map(const std::filesystem::path& path);

}  // namespace ssac

#endif  // SSAC_ARTIFACTS_HPP
