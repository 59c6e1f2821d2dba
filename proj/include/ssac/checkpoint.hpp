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

#ifndef SSAC_CHECKPOINT_HPP
#define SSAC_CHECKPOINT_HPP

#include <filesystem>
#include <optional>

#include "ssac/config.hpp"
#include "ssac/nn.hpp"
#include "ssac/trainer.hpp"

namespace ssac {

/// Networks plus the full run config they were trained with. A gate-only
/// checkpoint (from pretraining) carries no policy networks.
struct Checkpoint {
    RunConfig config;
    bool vanilla = false;
    long env_steps = 0;
    std::optional<Mlp> policy;
    std::optional<Mlp> value;
    std::optional<Mlp> target_value;
    std::optional<Mlp> q1;
    std::optional<Mlp> q2;
    std::optional<Mlp> gate;
};

Checkpoint make_checkpoint(const Trainer& trainer, long env_steps);
Checkpoint make_gate_checkpoint(const RunConfig& config, const Mlp& gate);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
/// Throws std::runtime_error on unreadable, corrupt or mismatched records.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// The switched controller described by a checkpoint. With lqr_only the gate
/// is ignored and the balance controller acts from the first step.
Agent agent_from_checkpoint(const Checkpoint& ckpt, bool lqr_only = false);

}  // namespace ssac

#endif  // SSAC_CHECKPOINT_HPP
