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

#include "ssac/trainer.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "ssac/observation.hpp"

namespace ssac {

int EpisodeRecord::engaged_steps() const {
    int n = 0;
    for (bool g : gate) n += g ? 1 : 0;
    return n;
}

std::vector<Transition> EpisodeRecord::transitions() const {
    std::vector<Transition> out;
    out.reserve(length());
    for (std::size_t t = 0; t < length(); ++t) {
        out.push_back({states[t], actions[t], rewards[t], states[t + 1], gate[t]});
    }
    return out;
}

EpisodeRecord do_rollout(const Agent& agent, const State& s0, RolloutMode mode, const AcrobotParams& params,
                         const GoalSpec& goal, Rng& rng) {
    if (agent.gate_mode == GateMode::kNetwork && agent.gate == nullptr) {
        throw std::invalid_argument("do_rollout: gate network required");
    }
    if (mode != RolloutMode::kRandomExplore && agent.gate_mode != GateMode::kAlwaysOn && agent.policy == nullptr) {
        throw std::invalid_argument("do_rollout: policy network required");
    }
    const TorqueLaw balance = [&](const State& s) { return lqr_action(s, agent.lqr, goal); };
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(-agent.torque_limit, agent.torque_limit);
    Hysteresis hysteresis(agent.on_threshold, agent.off_threshold);

    EpisodeRecord ep;
    const auto n = static_cast<std::size_t>(goal.episode_len);
    ep.states.reserve(n + 1);
    ep.actions.reserve(n);
    ep.rewards.reserve(n);
    ep.gate.reserve(n);
    ep.states.push_back(s0);

    for (std::size_t t = 0; t < n; ++t) {
        const State& s = ep.states.back();
        double g = 0.0;
        switch (agent.gate_mode) {
            case GateMode::kNetwork: g = gate_forward(*agent.gate, s); break;
            case GateMode::kAlwaysOn: g = 1.0; break;
            case GateMode::kAlwaysOff: g = 0.0; break;
        }
        const bool engaged = hysteresis.update(g);

        StepResult r;
        if (engaged) {
            r = step_feedback(s, balance, params);
        } else {
            double tau = 0.0;
            if (mode == RolloutMode::kRandomExplore) {
                tau = uniform(rng);
            } else {
                const Eigen::VectorXd out = agent.policy->forward(Eigen::VectorXd(observe(s)));
                const double eps = mode == RolloutMode::kStochastic ? normal(rng) : 0.0;
                tau = sample_action({out(0), out(1), agent.torque_limit}, eps).action;
            }
            r = step(s, tau, params);
        }
        if (r.diverged) {
            ep.diverged = true;
            break;
        }
        ep.states.push_back(r.state);
        ep.actions.push_back(r.torque);
        ep.rewards.push_back(reward(r.state, params));
        ep.gate.push_back(engaged);
        ep.episode_return += ep.rewards.back();
    }
    ep.success = !ep.diverged && is_success(std::span<const State>(ep.states).subspan(1), goal);
    return ep;
}

Trainer::Trainer(RunConfig cfg, TrainerOptions options)
    : cfg_((cfg.validate(), std::move(cfg))),
      options_(options),
      rng_(cfg_.schedule.seed),
      learner_(SacNets::create(rng_), cfg_.sac),
      gate_(make_gate_network(rng_)),
      gate_opt_(gate_, {cfg_.gate.learning_rate}),
      store_(cfg_.replay) {}

std::vector<GateSample> gate_samples(const EpisodeRecord& ep, const GoalSpec& goal, GateLabels labels) {
    const bool all = labels == GateLabels::kAll;
    // Engaged too late to hold the goal for the whole lookback window: the
    // outcome says nothing about the balance controller.
    const bool censored = !ep.success && ep.length() > 0 && ep.gate.back()
                          && goal_error(ep.states.back(), goal) < goal.eps_thr;
    std::vector<GateSample> out;
    for (std::size_t t = 0; t < ep.length(); ++t) {
        if (all || (ep.gate[t] && !censored)) out.push_back({ep.states[t], ep.success});
    }
    return out;
}

PretrainProgress Trainer::pretrain_gate(const std::function<void(const PretrainProgress&)>& on_epoch) {
    if (options_.vanilla) return {};
    const PretrainProgress p = ssac::pretrain_gate(cfg_.dynamics, cfg_.goal, cfg_.balance_controller(), cfg_.gate,
                                                   cfg_.schedule.gate_pretrain_steps, gate_, gate_opt_, store_,
                                                   rng_, on_epoch);
    gate_epochs_ += p.steps / cfg_.gate.update_period;
    return p;
}

void Trainer::set_gate(Mlp gate) {
    if (!gate.same_topology(gate_)) throw std::invalid_argument("set_gate: gate topology mismatch");
    gate_ = std::move(gate);
    gate_opt_ = Adam(gate_, {cfg_.gate.learning_rate});
}

void Trainer::import_gate_dataset(std::span<const GateSample> samples) {
    for (const GateSample& g : samples) store_.add_gate_samples(std::span<const State>(&g.state, 1), g.label);
}

Agent Trainer::agent() const {
    Agent a;
    a.policy = &learner_.nets().policy;
    a.gate = &gate_;
    a.gate_mode = options_.vanilla ? GateMode::kAlwaysOff : GateMode::kNetwork;
    a.lqr = cfg_.balance_controller();
    a.on_threshold = cfg_.gate.on_threshold;
    a.off_threshold = cfg_.gate.off_threshold;
    a.torque_limit = cfg_.sac.torque_limit;
    return a;
}

void Trainer::run_update_event(LogRow& stats) {
    const SacConfig& sac = cfg_.sac;
    const double p_success = options_.vanilla ? 0.0 : sac.success_prob;
    const auto mb = static_cast<std::size_t>(sac.minibatch);
    double q = 0.0;
    double pi = 0.0;
    double v = 0.0;
    double entropy = 0.0;
    long count = 0;
    for (int round = 0; round < sac.updates_per_event; ++round) {
        const std::vector<Transition> batch =
            store_.sample_batch(static_cast<std::size_t>(sac.replay_batch), p_success, rng_);
        for (std::size_t start = 0; start + mb <= batch.size(); start += mb) {
            const Batch minibatch = Batch::from(std::span<const Transition>(batch).subspan(start, mb),
                                                sac.torque_limit);
            UpdateStats u;
            try {
                u = learner_.update(minibatch, rng_);
            } catch (const std::runtime_error& e) {
                throw TrainingError(std::string(e.what()) + " in update event " + std::to_string(update_events_));
            }
            q += 0.5 * (u.q1_loss + u.q2_loss);
            pi += u.policy_loss;
            v += u.value_loss;
            entropy += u.entropy;
            ++count;
        }
    }
    ++update_events_;
    if (count > 0) {
        stats.q_loss = q / count;
        stats.policy_loss = pi / count;
        stats.value_loss = v / count;
        stats.entropy = entropy / count;
    }
}

void Trainer::train(const std::function<void(const LogRow&)>& on_episode,
                    const std::function<void(long env_steps)>& on_checkpoint) {
    const TrainSchedule& sched = cfg_.schedule;
    const Agent a = agent();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    LogRow stats;
    stats.q_loss = stats.policy_loss = stats.value_loss = stats.entropy = stats.gate_loss = nan;
    long env_steps = 0;
    long next_update = sched.steps_per_update;
    long next_gate = cfg_.gate.update_period;
    long next_checkpoint = sched.checkpoint_every;
    const std::optional<double> fixed_weight =
        cfg_.gate.joint_balance == GateBalance::kPretraining
            ? dataset_class_weight(store_.gate().items(), cfg_.gate.class_weight)
            : std::nullopt;

    while (env_steps < sched.joint_steps) {
        const RolloutMode mode =
            env_steps < sched.exploration_steps ? RolloutMode::kRandomExplore : RolloutMode::kStochastic;
        const EpisodeRecord ep = do_rollout(a, sample_initial_state(rng_), mode, cfg_.dynamics, cfg_.goal, rng_);

        const std::vector<Transition> transitions = ep.transitions();
        store_.add_episode(transitions, !options_.vanilla && ep.success);
        if (!options_.vanilla) {
            for (const GateSample& g : gate_samples(ep, cfg_.goal, cfg_.gate.joint_labels)) {
                store_.add_gate_samples(std::span<const State>(&g.state, 1), g.label);
            }
        }
        env_steps += static_cast<long>(ep.length()) + (ep.diverged ? 1 : 0);

        while (env_steps >= next_update) {
            if (next_update > sched.exploration_steps) run_update_event(stats);
            next_update += sched.steps_per_update;
        }
        if (!options_.vanilla) {
            while (env_steps >= next_gate) {
                const auto items = store_.gate().items();
                const GateEpoch epoch = fixed_weight
                                            ? train_gate_epoch(items, gate_, gate_opt_, cfg_.gate, *fixed_weight, rng_)
                                            : train_gate_epoch(items, gate_, gate_opt_, cfg_.gate, rng_);
                if (!epoch.skipped) stats.gate_loss = epoch.mean_loss;
                ++gate_epochs_;
                next_gate += cfg_.gate.update_period;
            }
        }

        stats.episode += 1;
        stats.env_steps = env_steps;
        stats.episode_return = ep.episode_return;
        stats.success = ep.success;
        stats.gate_engaged_steps = ep.engaged_steps();
        stats.general_size = store_.general().size();
        stats.success_size = store_.success().size();
        stats.gate_size = store_.gate().size();
        if (on_episode) on_episode(stats);

        while (sched.checkpoint_every > 0 && env_steps >= next_checkpoint) {
            if (on_checkpoint) on_checkpoint(env_steps);
            next_checkpoint += sched.checkpoint_every;
        }
    }
}

}  // namespace ssac
