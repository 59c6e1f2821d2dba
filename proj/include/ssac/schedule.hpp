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

#ifndef SSAC_SCHEDULE_HPP
#define SSAC_SCHEDULE_HPP

#include <cstdint>
#include <stdexcept>

namespace ssac {

/// Step budgets are counted in control steps.
struct TrainSchedule {
    long gate_pretrain_steps = 1'000'000;
    long joint_steps = 1'000'000;
    long exploration_steps = 50'000;
    long steps_per_update = 500;
    /// 0 disables periodic checkpoints.
    long checkpoint_every = 100'000;
    std::uint64_t seed = 0;

    void validate() const {
        if (gate_pretrain_steps < 0 || joint_steps < 0 || exploration_steps < 0) {
            throw std::invalid_argument("schedule step counts must be non-negative");
        }
        if (steps_per_update <= 0) throw std::invalid_argument("steps_per_update must be positive");
        if (checkpoint_every < 0) throw std::invalid_argument("checkpoint_every must be non-negative");
    }
};

/// Zero-velocity grid of initial positions over [-pi, pi) x [-pi, pi).
struct BalanceMapSpec {
    int n_theta1 = 25;
    int n_theta2 = 25;

    void validate() const {
        if (n_theta1 < 2 || n_theta2 < 2) throw std::invalid_argument("balance map grid needs at least 2x2 cells");
    }
};

}  // namespace ssac

#endif  // SSAC_SCHEDULE_HPP
