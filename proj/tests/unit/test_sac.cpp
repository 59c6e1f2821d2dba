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
#include <random>

#include "gradcheck.hpp"
#include "ssac/observation.hpp"
#include "ssac/sac.hpp"

using namespace ssac;

namespace {

std::vector<Transition> random_transitions(int n, double torque_limit, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Transition> out;
    for (int i = 0; i < n; ++i) {
        Transition t;
        t.state = sample_initial_state(rng);
        t.next_state = sample_initial_state(rng);
        t.action = torque_limit * u(rng);
        t.reward = 2.0 * u(rng);
        out.push_back(t);
    }
    return out;
}

struct Fixture {
    SacNets nets;
    Batch batch;
};

Fixture random_fixture(Rng& rng, int n = 8) {
    Fixture f{SacNets::create(rng), {}};
    for (Mlp* net : {&f.nets.policy, &f.nets.value, &f.nets.target_value, &f.nets.q1, &f.nets.q2}) {
        gradcheck::randomize(*net, rng);
    }
    f.batch = Batch::from(random_transitions(n, 25.0, rng), 25.0);
    return f;
}

}  // namespace

TEST(Batch, NormalizesActionsAndObservesStates) {
    Rng rng(1);
    const auto tr = random_transitions(5, 25.0, rng);
    const Batch b = Batch::from(tr, 25.0);
    ASSERT_EQ(b.size(), 5);
    for (int j = 0; j < 5; ++j) {
        EXPECT_DOUBLE_EQ(b.action(j), tr[j].action / 25.0);
        EXPECT_EQ(Observation(b.obs.col(j)), observe(tr[j].state));
        EXPECT_EQ(Observation(b.next_obs.col(j)), observe(tr[j].next_state));
        EXPECT_EQ(b.reward(j), tr[j].reward);
    }
    const Eigen::MatrixXd x = critic_input(b.obs, b.action);
    EXPECT_EQ(x.rows(), 7);
    EXPECT_EQ(x.row(6), b.action);
}

TEST(Observation, Encoding) {
    const Observation o = observe({std::numbers::pi / 2, 0.0, 4 * std::numbers::pi, -2 * std::numbers::pi});
    EXPECT_NEAR(o(0), 0.0, 1e-15);
    EXPECT_EQ(o(1), 1.0);
    EXPECT_EQ(o(2), 1.0);
    EXPECT_EQ(o(3), 0.0);
    EXPECT_EQ(o(4), 1.0);
    EXPECT_EQ(o(5), -0.5);
}

TEST(SacNets, Topologies) {
    Rng rng(2);
    const SacNets n = SacNets::create(rng);
    EXPECT_EQ(n.policy.sizes(), (std::vector<int>{6, 32, 32, 32, 2}));
    EXPECT_EQ(n.policy.head(), Head::kGaussian);
    EXPECT_EQ(n.value.sizes(), (std::vector<int>{6, 32, 32, 32, 1}));
    EXPECT_EQ(n.q1.sizes(), (std::vector<int>{7, 32, 32, 32, 1}));
    EXPECT_EQ(n.target_value.flatten(), n.value.flatten());
    EXPECT_NE(n.q1.flatten(), n.q2.flatten());
}

TEST(QTarget, RewardPlusDiscountedTargetValue) {
    Rng rng(3);
    const Fixture f = random_fixture(rng);
    const SacConfig cfg;
    const Eigen::RowVectorXd y = q_target(f.batch, f.nets, cfg);
    for (Eigen::Index j = 0; j < f.batch.size(); ++j) {
        const double v = f.nets.target_value.forward(Eigen::VectorXd(f.batch.next_obs.col(j)))(0);
        EXPECT_NEAR(y(j), f.batch.reward(j) + 0.95 * v, 1e-12);
    }
}

TEST(ValueTarget, MinCriticMinusEntropyTerm) {
    Rng rng(4);
    const Fixture f = random_fixture(rng);
    const SacConfig cfg;
    const Eigen::RowVectorXd eps = standard_normal(f.batch.size(), rng);
    const Eigen::RowVectorXd y = value_target(f.batch, f.nets, cfg, eps);
    for (Eigen::Index j = 0; j < f.batch.size(); ++j) {
        const Eigen::Vector2d head = f.nets.policy.forward(Eigen::VectorXd(f.batch.obs.col(j)));
        const ActionSample a = sample_action({head(0), head(1), 1.0}, eps(j));
        Eigen::VectorXd x(7);
        x << f.batch.obs.col(j), a.action;
        const double q = std::min(f.nets.q1.forward(x)(0), f.nets.q2.forward(x)(0));
        EXPECT_NEAR(y(j), q - 0.05 * a.log_prob, 1e-10);
    }
}

namespace {

// Coordinates checked per configuration; the sample changes every trial.
constexpr std::size_t kCoords = 200;

bool critics_smooth_at(const SacNets& nets, const Eigen::MatrixXd& x) {
    return gradcheck::kink_margin(nets.q1, x) > gradcheck::kKinkMargin
           && gradcheck::kink_margin(nets.q2, x) > gradcheck::kKinkMargin;
}

}  // namespace

TEST(Gradients, CriticLoss) {
    Rng rng(5);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Fixture f;
        do {
            f = random_fixture(rng);
        } while (!critics_smooth_at(f.nets, critic_input(f.batch.obs, f.batch.action)));
        const Eigen::RowVectorXd y = gradcheck::random_matrix(1, f.batch.size(), rng, 3.0);
        const QLoss l = q_loss(f.batch, f.nets, y);
        worst = std::max(worst, gradcheck::sampled_parameter_error(
                                    f.nets.q1, [&] { return q_loss(f.batch, f.nets, y).q1.loss; }, l.q1.grad,
                                    kCoords, rng));
        worst = std::max(worst, gradcheck::sampled_parameter_error(
                                    f.nets.q2, [&] { return q_loss(f.batch, f.nets, y).q2.loss; }, l.q2.grad,
                                    kCoords, rng));
    }
    EXPECT_LT(worst, 1e-4);
}

TEST(Gradients, ValueLoss) {
    Rng rng(6);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Fixture f;
        do {
            f = random_fixture(rng);
        } while (gradcheck::kink_margin(f.nets.value, f.batch.obs) < gradcheck::kKinkMargin);
        const SacConfig cfg;
        const Eigen::RowVectorXd y = value_target(f.batch, f.nets, cfg, rng);
        const LossAndGrad l = value_loss(f.batch, f.nets.value, y);
        worst = std::max(worst, gradcheck::sampled_parameter_error(
                                    f.nets.value, [&] { return value_loss(f.batch, f.nets.value, y).loss; }, l.grad,
                                    kCoords, rng));
    }
    EXPECT_LT(worst, 1e-4);
}

TEST(Gradients, PolicyLossThroughReparameterization) {
    Rng rng(7);
    for (PolicyCritic critic : {PolicyCritic::kMin, PolicyCritic::kFirst}) {
        SacConfig cfg;
        cfg.policy_critic = critic;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            Fixture f;
            Eigen::RowVectorXd eps;
            for (;;) {
                f = random_fixture(rng);
                eps = standard_normal(f.batch.size(), rng);
                if (gradcheck::kink_margin(f.nets.policy, f.batch.obs) < gradcheck::kKinkMargin) continue;
                const PolicySample s = sample_policy(f.nets.policy, f.batch.obs, eps);
                const Eigen::MatrixXd x = critic_input(f.batch.obs, s.squashed);
                if (!critics_smooth_at(f.nets, x)) continue;
                // The min over critics switches where they cross.
                const Eigen::RowVectorXd gap = f.nets.q1.forward(x).row(0) - f.nets.q2.forward(x).row(0);
                if (gap.cwiseAbs().minCoeff() > gradcheck::kKinkMargin) break;
            }
            const LossAndGrad l = policy_loss(f.batch, f.nets, cfg, eps);
            worst = std::max(worst, gradcheck::sampled_parameter_error(
                                        f.nets.policy, [&] { return policy_loss(f.batch, f.nets, cfg, eps).loss; },
                                        l.grad, kCoords, rng));
        }
        EXPECT_LT(worst, 1e-4);
    }
}

TEST(PolicyLoss, MatchesPerSampleFormula) {
    Rng rng(8);
    const Fixture f = random_fixture(rng);
    const SacConfig cfg;
    const Eigen::RowVectorXd eps = standard_normal(f.batch.size(), rng);
    double expected = 0.0;
    for (Eigen::Index j = 0; j < f.batch.size(); ++j) {
        const Eigen::Vector2d head = f.nets.policy.forward(Eigen::VectorXd(f.batch.obs.col(j)));
        const ActionSample a = sample_action({head(0), head(1), 1.0}, eps(j));
        Eigen::VectorXd x(7);
        x << f.batch.obs.col(j), a.action;
        expected += 0.05 * a.log_prob - std::min(f.nets.q1.forward(x)(0), f.nets.q2.forward(x)(0));
    }
    EXPECT_NEAR(policy_loss(f.batch, f.nets, cfg, eps).loss, expected / static_cast<double>(f.batch.size()), 1e-10);
}

TEST(Polyak, Average) {
    Rng rng(9);
    Mlp a({3, 4, 1}, Head::kIdentity), b({3, 4, 1}, Head::kIdentity);
    a.init_he_uniform(rng);
    b.init_he_uniform(rng);
    const auto ta = a.flatten(), tb = b.flatten();
    polyak_update(a, b, 0.995);
    const auto out = a.flatten();
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], 0.995 * ta[i] + 0.005 * tb[i], 1e-15);
    polyak_update(a, a, 0.3);
    const auto self = a.flatten();
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(self[i], out[i], 1e-15);
    Mlp c({3, 5, 1}, Head::kIdentity);
    EXPECT_THROW(polyak_update(a, c, 0.5), std::invalid_argument);
}

TEST(SacLearner, UpdateMovesEveryNetworkAndTracksTarget) {
    Rng rng(10);
    Fixture f = random_fixture(rng, 128);
    SacLearner learner(f.nets, SacConfig{});
    Rng update_rng(11);
    const UpdateStats s = learner.update(f.batch, update_rng);
    EXPECT_TRUE(std::isfinite(s.q1_loss) && std::isfinite(s.policy_loss) && std::isfinite(s.value_loss));
    EXPECT_TRUE(std::isfinite(s.entropy));
    EXPECT_NE(learner.nets().policy.flatten(), f.nets.policy.flatten());
    EXPECT_NE(learner.nets().q1.flatten(), f.nets.q1.flatten());
    EXPECT_NE(learner.nets().q2.flatten(), f.nets.q2.flatten());
    EXPECT_NE(learner.nets().value.flatten(), f.nets.value.flatten());
    Mlp expected_target = f.nets.target_value;
    polyak_update(expected_target, learner.nets().value, 0.995);
    EXPECT_EQ(learner.nets().target_value.flatten(), expected_target.flatten());
    EXPECT_EQ(learner.adam_steps(), 1);
}

TEST(SacLearner, Deterministic) {
    auto run = [] {
        Rng rng(12);
        Fixture f = random_fixture(rng, 64);
        SacLearner learner(f.nets, SacConfig{});
        Rng u(13);
        for (int i = 0; i < 5; ++i) learner.update(f.batch, u);
        return learner.nets().policy.flatten();
    };
    EXPECT_EQ(run(), run());
}

TEST(SacLearner, CriticRegressesFixedTargets) {
    // With a frozen data set the critic loss must fall over many updates.
    Rng rng(14);
    Fixture f = random_fixture(rng, 128);
    SacLearner learner(f.nets, SacConfig{});
    Rng u(15);
    const double first = learner.update(f.batch, u).q1_loss;
    double last = first;
    for (int i = 0; i < 300; ++i) last = learner.update(f.batch, u).q1_loss;
    EXPECT_LT(last, 0.5 * first);
}

TEST(SacConfig, Validation) {
    SacConfig c;
    EXPECT_NO_THROW(c.validate());
    c.discount = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.torque_limit = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.replay_batch = 100;  // not a multiple of the minibatch
    EXPECT_THROW(c.validate(), std::invalid_argument);
}
