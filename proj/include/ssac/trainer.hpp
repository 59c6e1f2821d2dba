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

#ifndef SSAC_TRAINER_HPP
#define SSAC_TRAINER_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssac/config.hpp"
#include "ssac/gate.hpp"
#include "ssac/sac.hpp"

namespace ssac {

enum class RolloutMode {
    kStochastic,
    /// eps = 0: the policy mean squashed through tanh.
    kDeterministic,
    /// Uniform torque on [-torque_limit, torque_limit) while disengaged.
    kRandomExplore,
};

enum class GateMode {
    kNetwork,
    /// Balance controller engaged from the first step.
    kAlwaysOn,
    /// Swing-up policy only, as in plain SAC.
    kAlwaysOff,
};

/// The switched controller: gate + hysteresis choosing between the balance
/// controller and the swing-up policy. Networks are borrowed, not owned.
struct Agent {
    const Mlp* policy = nullptr;
    const Mlp* gate = nullptr;
    GateMode gate_mode = GateMode::kNetwork;
    LqrGains lqr;
    double on_threshold = 0.9;
    double off_threshold = 0.5;
    double torque_limit = 25.0;
};

/// One episode. states holds s_0 .. s_N; the per-step vectors hold N entries.
struct EpisodeRecord {
    std::vector<State> states;
    std::vector<double> actions;
    std::vector<double> rewards;
    std::vector<bool> gate;
    bool success = false;
    bool diverged = false;
    double episode_return = 0.0;

    std::size_t length() const { return actions.size(); }
    int engaged_steps() const;
    std::vector<Transition> transitions() const;
};

/// Runs one episode of the switched controller. The policy acts with a
/// 0.2 s hold; the balance controller is re-evaluated every substep.
/// Hysteresis starts disengaged. Divergence truncates the episode and marks
/// it unsuccessful.
EpisodeRecord do_rollout(const Agent& agent, const State& s0, RolloutMode mode, const AcrobotParams& params,
                         const GoalSpec& goal, Rng& rng);

/// The gate dataset entries contributed by one joint-phase episode, each
/// labelled with the episode outcome.
std::vector<GateSample> gate_samples(const EpisodeRecord& ep, const GoalSpec& goal, GateLabels labels);

struct LogRow {
    long episode = 0;
    long env_steps = 0;
    double episode_return = 0.0;
    bool success = false;
    int gate_engaged_steps = 0;
    std::size_t general_size = 0;
    std::size_t success_size = 0;
    std::size_t gate_size = 0;
    /// Means over the most recent update event; NaN before the first one.
    double q_loss = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double gate_loss = 0.0;
};

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TrainerOptions {
    /// Plain SAC: no gate, no balance controller, single buffer.
    bool vanilla = false;
};

/**
 * Switched soft actor critic training loop.
 *
 * Phase 0 (pretrain_gate) fits the gate on balance-controller episodes.
 * Phase 1 (train) alternates rollouts and updates: every steps_per_update
 * environment steps after the exploration phase it runs updates_per_event
 * rounds, each drawing a fresh replay batch and sweeping it in minibatches;
 * every gate update_period steps it runs one gate epoch over the whole
 * gate dataset.
 */
class Trainer {
public:
    Trainer(RunConfig cfg, TrainerOptions options = {});

    PretrainProgress pretrain_gate(const std::function<void(const PretrainProgress&)>& on_epoch = {});

    /// Replaces the gate network (for example with a pretrained checkpoint).
    void set_gate(Mlp gate);
    /// Seeds the gate dataset, for example with a saved pretraining dataset.
    void import_gate_dataset(std::span<const GateSample> samples);

    /// on_checkpoint fires every schedule.checkpoint_every joint steps.
    void train(const std::function<void(const LogRow&)>& on_episode = {},
               const std::function<void(long env_steps)>& on_checkpoint = {});

    Agent agent() const;
    const RunConfig& config() const { return cfg_; }
    const TrainerOptions& options() const { return options_; }
    const SacNets& nets() const { return learner_.nets(); }
    const Mlp& gate() const { return gate_; }
    const ReplayStore& store() const { return store_; }
    long update_events() const { return update_events_; }
    long sac_adam_steps() const { return learner_.adam_steps(); }
    long gate_epochs() const { return gate_epochs_; }

private:
    void run_update_event(LogRow& stats);

    RunConfig cfg_;
    TrainerOptions options_;
    Rng rng_;
    SacLearner learner_;
    Mlp gate_;
    Adam gate_opt_;
    ReplayStore store_;
    long update_events_ = 0;
    long gate_epochs_ = 0;
};

}  // namespace ssac

#endif  // SSAC_TRAINER_HPP
