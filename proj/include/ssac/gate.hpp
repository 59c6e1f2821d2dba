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

#ifndef SSAC_GATE_HPP
#define SSAC_GATE_HPP

#include <functional>
#include <optional>
#include <span>

#include "ssac/lqr.hpp"
#include "ssac/nn.hpp"
#include "ssac/replay.hpp"

namespace ssac {

/// Which states of a joint-phase episode enter the gate dataset.
enum class GateLabels {
    /// States at which the balance controller was engaged. An unsuccessful
    /// episode that ends engaged inside the goal ball contributes nothing.
    kEngaged,
    /// Every visited state.
    kAll,
};

/// Class ratio behind the positive class weight during joint training.
enum class GateBalance {
    /// Fixed at the ratio of the dataset the joint phase starts from.
    kPretraining,
    /// Recomputed over the current dataset at every epoch.
    kCurrent,
};

struct GateConfig {
    /// Manual factor w in the positive class weight (n_total / n_positive) * w.
    double class_weight = 0.08;
    double learning_rate = 1e-5;
    double on_threshold = 0.9;
    double off_threshold = 0.5;
    /// Environment steps between full-buffer gate epochs.
    long update_period = 50'000;
    int minibatch = 128;
    GateLabels joint_labels = GateLabels::kEngaged;
    GateBalance joint_balance = GateBalance::kPretraining;

    void validate() const;
};

/// Two-threshold switch: engages above on_threshold, releases below
/// off_threshold, holds otherwise.
class Hysteresis {
public:
    Hysteresis() = default;
    Hysteresis(double on_threshold, double off_threshold);

    bool update(double g);
    void reset() { engaged_ = false; }
    bool engaged() const { return engaged_; }

private:
    double on_ = 0.9;
    double off_ = 0.5;
    bool engaged_ = false;
};

/// 6 -> 32 -> 32 -> 1 with a sigmoid output.
Mlp make_gate_network(Rng& rng);

double gate_forward(const Mlp& net, const State& s);

/// (n_total / n_positive) * w. Requires n_positive > 0.
double positive_class_weight(std::size_t n_total, std::size_t n_positive, double w);

inline constexpr double kProbabilityClamp = 1e-7;

struct GateLoss {
    double loss = 0.0;
    Gradients grad;
    double class_weight = 0.0;
    std::size_t positives = 0;
};

/// Weighted binary cross entropy with an explicit positive weight, averaged
/// over the given samples.
GateLoss gate_loss(std::span<const GateSample> samples, const Mlp& net, double positive_weight);

/// Weighted binary cross entropy over the whole dataset with the class
/// weight derived from its label counts. Empty when there are no positive
/// labels yet. Throws std::invalid_argument on an empty dataset.
std::optional<GateLoss> gate_loss(std::span<const GateSample> samples, const Mlp& net, const GateConfig& cfg);

struct GateEpoch {
    bool skipped = true;
    double mean_loss = 0.0;
    long adam_steps = 0;
};

/// One shuffled pass over the whole dataset in minibatches, with the class
/// weight fixed from the full dataset's label counts.
GateEpoch train_gate_epoch(std::span<const GateSample> samples, Mlp& net, Adam& opt, const GateConfig& cfg,
                           Rng& rng);
/// Same pass with a given positive class weight.
GateEpoch train_gate_epoch(std::span<const GateSample> samples, Mlp& net, Adam& opt, const GateConfig& cfg,
                           double positive_weight, Rng& rng);

/// Positive class weight over samples; empty when none is positive.
std::optional<double> dataset_class_weight(std::span<const GateSample> samples, double w);

struct PretrainProgress {
    long steps = 0;
    long episodes = 0;
    long positive_episodes = 0;
    GateEpoch last_epoch;
};

/**
 * Supervised gate pretraining: balance-controller episodes from random
 * initial states, each visited state labelled with its episode's success,
 * with a gate epoch every update_period control steps until steps are used.
 */
PretrainProgress pretrain_gate(const AcrobotParams& params, const GoalSpec& goal, const LqrGains& gains,
                               const GateConfig& cfg, long steps, Mlp& net, Adam& opt, ReplayStore& store,
                               Rng& rng, const std::function<void(const PretrainProgress&)>& on_epoch = {});

}  // namespace ssac

#endif  // SSAC_GATE_HPP
