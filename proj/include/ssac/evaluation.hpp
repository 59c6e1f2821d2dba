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

#ifndef SSAC_EVALUATION_HPP
#define SSAC_EVALUATION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ssac/gate.hpp"
#include "ssac/schedule.hpp"
#include "ssac/trainer.hpp"

namespace ssac {

/// n points -pi + 2 pi i / n, i = 0 .. n-1.
std::vector<double> grid_points(int n);

struct BalanceCell {
    double theta1 = 0.0;
    double theta2 = 0.0;
    bool success = false;
};

/// Deterministic episode from every zero-velocity grid cell.
std::vector<BalanceCell> balance_map(const Agent& agent, const BalanceMapSpec& spec, const AcrobotParams& params,
                                     const GoalSpec& goal);

double success_rate(std::span<const BalanceCell> cells);

/// Confusion counts of the gate against the balance-controller oracle.
struct GateMetrics {
    long true_pos = 0;
    long false_pos = 0;
    long true_neg = 0;
    long false_neg = 0;
    /// Decisions at the hysteresis on-threshold.
    long engage_false_pos = 0;
    long engage_true_pos = 0;

    double precision() const;
    double recall() const;
    double engage_false_positive_rate() const;
    long samples() const { return true_pos + false_pos + true_neg + false_neg; }
};

/**
 * Held-out gate quality. Fresh balance-controller episodes from random
 * initial states supply states (every stride-th decision point); each is
 * labelled by its own basin_label rollout rather than its episode's outcome.
 * A positive prediction is g > 0.5; an engage is g > on_threshold.
 */
GateMetrics evaluate_gate(const Mlp& gate, const GateConfig& cfg, const LqrGains& gains, const AcrobotParams& params,
                          const GoalSpec& goal, int episodes, int stride, Rng& rng);

struct RareEventResult {
    long episodes = 0;
    long hits = 0;
    double rate() const { return episodes > 0 ? static_cast<double>(hits) / static_cast<double>(episodes) : 0.0; }
};

/// Uniform-random-torque episodes (no gate) from random initial states; an
/// episode is a hit when any of samples_per_episode distinct states drawn
/// from s_0 .. s_N has a true basin_label.
RareEventResult rare_event_rate(const LqrGains& gains, double torque_limit, const AcrobotParams& params,
                                const GoalSpec& goal, long episodes, int samples_per_episode, Rng& rng);

/// Mean of the last min(window, n) values.
double trailing_mean(std::span<const double> values, std::size_t window);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1)
};

MeanStd mean_std(std::span<const double> values);

}  // namespace ssac

#endif  // SSAC_EVALUATION_HPP
