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

#include <cmath>
#include <numbers>

#include "ssac/trainer.hpp"

using namespace ssac;

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig small_config() {
    RunConfig cfg;
    cfg.schedule.gate_pretrain_steps = 5000;
    cfg.schedule.joint_steps = 3000;
    cfg.schedule.exploration_steps = 1000;
    cfg.schedule.checkpoint_every = 1000;
    cfg.gate.update_period = 1000;
    cfg.sac.replay_batch = 256;
    cfg.sac.updates_per_event = 1;
    return cfg;
}

struct Nets {
    SacNets sac;
    Mlp gate;
};

Nets make_nets(std::uint64_t seed) {
    Rng rng(seed);
    Nets n{SacNets::create(rng), make_gate_network(rng)};
    return n;
}

}  // namespace

TEST(Rollout, ShapesAndBounds) {
    const Nets n = make_nets(1);
    Agent a;
    a.policy = &n.sac.policy;
    a.gate_mode = GateMode::kAlwaysOff;
    a.torque_limit = 10.0;
    Rng rng(2);
    const EpisodeRecord ep = do_rollout(a, {-kPi / 2, 0, 0, 0}, RolloutMode::kStochastic, {}, {}, rng);
    ASSERT_EQ(ep.states.size(), 51u);
    ASSERT_EQ(ep.length(), 50u);
    ASSERT_EQ(ep.rewards.size(), 50u);
    double total = 0.0;
    for (std::size_t t = 0; t < 50; ++t) {
        EXPECT_LT(std::abs(ep.actions[t]), 10.0);
        EXPECT_FALSE(ep.gate[t]);
        EXPECT_DOUBLE_EQ(ep.rewards[t], reward(ep.states[t + 1]));
        total += ep.rewards[t];
    }
    EXPECT_DOUBLE_EQ(ep.episode_return, total);
    const auto tr = ep.transitions();
    ASSERT_EQ(tr.size(), 50u);
    EXPECT_EQ(tr[3].next_state, ep.states[4]);
}

TEST(Rollout, DeterministicModeIgnoresRng) {
    const Nets n = make_nets(3);
    Agent a;
    a.policy = &n.sac.policy;
    a.gate = &n.gate;
    Rng r1(4), r2(5);
    const auto e1 = do_rollout(a, {0.3, -1.0, 0.2, 0.1}, RolloutMode::kDeterministic, {}, {}, r1);
    const auto e2 = do_rollout(a, {0.3, -1.0, 0.2, 0.1}, RolloutMode::kDeterministic, {}, {}, r2);
    EXPECT_EQ(e1.states, e2.states);
    EXPECT_EQ(e1.actions, e2.actions);
}

TEST(Rollout, BalanceControllerHoldsGoal) {
    Agent a;
    a.gate_mode = GateMode::kAlwaysOn;
    Rng rng(6);
    const auto ep = do_rollout(a, {kPi / 2 + 0.02, -0.02, 0, 0}, RolloutMode::kDeterministic, {}, {}, rng);
    EXPECT_TRUE(ep.success);
    EXPECT_EQ(ep.engaged_steps(), 50);
}

TEST(Rollout, RandomExploreUsesUniformTorque) {
    Agent a;
    a.gate_mode = GateMode::kAlwaysOff;
    a.torque_limit = 3.0;
    Rng rng(7);
    const auto ep = do_rollout(a, {-kPi / 2, 0, 0, 0}, RolloutMode::kRandomExplore, {}, {}, rng);
    double sum = 0.0;
    for (double u : ep.actions) {
        EXPECT_LE(std::abs(u), 3.0);
        sum += u;
    }
    EXPECT_NE(sum, 0.0);
}

TEST(Rollout, MissingNetworksRejected) {
    Agent a;
    Rng rng(8);
    EXPECT_THROW(do_rollout(a, {}, RolloutMode::kStochastic, {}, {}, rng), std::invalid_argument);
    a.gate_mode = GateMode::kAlwaysOff;
    EXPECT_THROW(do_rollout(a, {}, RolloutMode::kStochastic, {}, {}, rng), std::invalid_argument);
}

TEST(Trainer, UpdateScheduleAndLogMonotone) {
    Trainer t(small_config());
    t.pretrain_gate();
    EXPECT_EQ(t.gate_epochs(), 5);
    std::vector<LogRow> rows;
    std::vector<long> checkpoints;
    t.train([&](const LogRow& r) { rows.push_back(r); }, [&](long s) { checkpoints.push_back(s); });
    ASSERT_FALSE(rows.empty());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_GT(rows[i].env_steps, rows[i - 1].env_steps);
        EXPECT_EQ(rows[i].episode, rows[i - 1].episode + 1);
    }
    EXPECT_GE(rows.back().env_steps, 3000);
    // Update events at 1500, 2000, 2500, 3000.
    EXPECT_EQ(t.update_events(), 4);
    EXPECT_EQ(t.sac_adam_steps(), 4 * 2);
    EXPECT_EQ(t.gate_epochs(), 5 + 3);
    EXPECT_EQ(checkpoints, (std::vector<long>{1000, 2000, 3000}));
    EXPECT_TRUE(std::isnan(rows.front().q_loss));
    EXPECT_TRUE(std::isfinite(rows.back().q_loss));
    EXPECT_EQ(rows.back().general_size, 3000u);
}

TEST(Trainer, VanillaUsesPolicyOnlyAndOneBuffer) {
    Trainer t(small_config(), {true});
    EXPECT_EQ(t.pretrain_gate().episodes, 0);
    long engaged = 0;
    t.train([&](const LogRow& r) { engaged += r.gate_engaged_steps; });
    EXPECT_EQ(engaged, 0);
    EXPECT_TRUE(t.store().success().empty());
    EXPECT_EQ(t.store().gate().size(), 0u);
    EXPECT_EQ(t.gate_epochs(), 0);
    EXPECT_EQ(t.agent().gate_mode, GateMode::kAlwaysOff);
}

TEST(Trainer, DeterministicGivenSeed) {
    auto run = [](std::uint64_t seed) {
        RunConfig cfg = small_config();
        cfg.schedule.seed = seed;
        Trainer t(cfg);
        t.pretrain_gate();
        std::vector<double> returns;
        t.train([&](const LogRow& r) { returns.push_back(r.episode_return); });
        returns.push_back(t.nets().policy.flatten().front());
        return returns;
    };
    EXPECT_EQ(run(0), run(0));
    EXPECT_NE(run(0), run(1));
}

TEST(Trainer, SetGateRejectsWrongTopology) {
    Trainer t(small_config());
    EXPECT_THROW(t.set_gate(Mlp({6, 8, 1}, Head::kSigmoid)), std::invalid_argument);
    Rng rng(9);
    Mlp g = make_gate_network(rng);
    t.set_gate(g);
    EXPECT_EQ(t.gate().flatten(), g.flatten());
}

TEST(Trainer, JointGateLabelsFollowEngagement) {
    auto constant_gate = [](double bias) {
        Rng rng(4);
        Mlp g = make_gate_network(rng);
        g.layers().back().weight.setZero();
        g.layers().back().bias.setConstant(bias);
        return g;
    };
    auto gate_samples_after_training = [&](double bias, GateLabels labels) {
        RunConfig cfg = small_config();
        cfg.gate.joint_labels = labels;
        Trainer t(cfg);
        t.set_gate(constant_gate(bias));
        long steps = 0;
        t.train([&](const LogRow& r) { steps = r.env_steps; });
        return std::pair{t.store().gate().size(), static_cast<std::size_t>(steps)};
    };
    // Never engaged: nothing is learned about the balance controller.
    EXPECT_EQ(gate_samples_after_training(-20.0, GateLabels::kEngaged).first, 0u);
    const auto all = gate_samples_after_training(-20.0, GateLabels::kAll);
    EXPECT_EQ(all.first, all.second);
    // Always engaged: every decision state is a balance-controller sample.
    const auto engaged = gate_samples_after_training(20.0, GateLabels::kEngaged);
    EXPECT_EQ(engaged.first, engaged.second);
}

TEST(Trainer, JointClassBalanceSetting) {
    auto gate_after_training = [](GateBalance balance) {
        RunConfig cfg = small_config();
        cfg.gate.joint_balance = balance;
        Trainer t(cfg);
        t.pretrain_gate();
        Rng rng(4);
        Mlp g = make_gate_network(rng);
        g.layers().back().bias.setConstant(4.0);
        t.set_gate(g);
        t.train();
        return t.gate().flatten();
    };
    // A gate that engages almost everywhere without saturating: the joint
    // samples move the dataset's class ratio away from the pretraining ratio.
    EXPECT_NE(gate_after_training(GateBalance::kPretraining), gate_after_training(GateBalance::kCurrent));
}

TEST(GateSamples, EngagedStatesWithCensoring) {
    EpisodeRecord ep;
    const State far{-kPi / 2, 0, 0, 0};
    const State near{kPi / 2 + 0.01, 0, 0, 0};
    ep.states = {far, far, near, near};
    ep.actions = {0, 0, 0};
    ep.rewards = {0, 0, 0};
    ep.gate = {false, true, true};
    ep.success = true;
    auto s = gate_samples(ep, {}, GateLabels::kEngaged);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].state, far);
    EXPECT_TRUE(s[0].label && s[1].label);
    EXPECT_EQ(gate_samples(ep, {}, GateLabels::kAll).size(), 3u);

    // Ends engaged inside the goal ball without meeting the lookback: skipped.
    ep.success = false;
    EXPECT_TRUE(gate_samples(ep, {}, GateLabels::kEngaged).empty());
    EXPECT_EQ(gate_samples(ep, {}, GateLabels::kAll).size(), 3u);

    // Ends engaged outside the ball: a genuine failure of the balance controller.
    ep.states.back() = far;
    s = gate_samples(ep, {}, GateLabels::kEngaged);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_FALSE(s[0].label || s[1].label);

    // Ends disengaged: only the engaged states count.
    ep.gate = {true, false, false};
    ep.states.back() = near;
    EXPECT_EQ(gate_samples(ep, {}, GateLabels::kEngaged).size(), 1u);
}
