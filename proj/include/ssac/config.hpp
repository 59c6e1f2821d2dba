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

#ifndef SSAC_CONFIG_HPP
#define SSAC_CONFIG_HPP

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "ssac/dynamics.hpp"
#include "ssac/gate.hpp"
#include "ssac/lqr.hpp"
#include "ssac/replay.hpp"
#include "ssac/sac.hpp"
#include "ssac/schedule.hpp"

namespace ssac {

/// Every tunable constant of a run. Serialized as JSON; a config file may
/// give any subset of fields, the rest keep their defaults.
struct RunConfig {
    AcrobotParams dynamics;
    GoalSpec goal;
    LqrGains lqr;
    /// Balance controller torque clamp; the policy torque limit when unset.
    std::optional<double> lqr_saturation;
    SacConfig sac;
    GateConfig gate;
    TrainSchedule schedule;
    ReplayStore::Capacities replay;
    BalanceMapSpec balance_map;

    LqrGains balance_controller() const;
    void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);

/// Unknown keys and wrong types are errors (std::runtime_error).
RunConfig run_config_from_json(const nlohmann::json& doc);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace ssac

#endif  // SSAC_CONFIG_HPP
