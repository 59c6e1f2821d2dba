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

#ifndef SSAC_SAC_HPP
#define SSAC_SAC_HPP

#include <span>

#include <Eigen/Dense>

#include "ssac/nn.hpp"
#include "ssac/replay.hpp"

namespace ssac {

/// Which critic the policy objective differentiates through.
enum class PolicyCritic { kMin, kFirst };

struct SacConfig {
    double discount = 0.95;
    double alpha = 0.05;
    double polyak = 0.995;
    int replay_batch = 4096;
    int minibatch = 128;
    int updates_per_event = 4;
    double success_prob = 0.5;
    double learning_rate = 1e-3;
    PolicyCritic policy_critic = PolicyCritic::kMin;
    /// Squash scale of the policy action, N*m.
    double torque_limit = 25.0;

    void validate() const;
};

/// Policy, value, target value and twin critics.
struct SacNets {
    Mlp policy;
    Mlp value;
    Mlp target_value;
    Mlp q1;
    Mlp q2;

    /// Four dense layers of width 32 each; target value starts as a copy of
    /// the value network.
    static SacNets create(Rng& rng);
};

inline constexpr int kHiddenWidth = 32;

/// Columnar view of a set of transitions. Actions are stored divided by the
/// torque limit, which is also how they enter the critics.
struct Batch {
    Eigen::MatrixXd obs;
    Eigen::MatrixXd next_obs;
    Eigen::RowVectorXd action;
    Eigen::RowVectorXd reward;

    static Batch from(std::span<const Transition> transitions, double torque_limit);
    Eigen::Index size() const { return obs.cols(); }
};

Eigen::MatrixXd critic_input(const Eigen::MatrixXd& obs, const Eigen::RowVectorXd& action);

/// r + discount * V_target(s').
Eigen::RowVectorXd q_target(const Batch& batch, const SacNets& nets, const SacConfig& cfg);

struct LossAndGrad {
    double loss = 0.0;
    Gradients grad;
};

struct QLoss {
    LossAndGrad q1;
    LossAndGrad q2;
};

/// Mean half squared error of each critic against fixed targets.
QLoss q_loss(const Batch& batch, const SacNets& nets, const Eigen::RowVectorXd& targets);
QLoss q_loss(const Batch& batch, const SacNets& nets, const SacConfig& cfg);

/// Reparameterized policy sample for every state of a batch.
struct PolicySample {
    Eigen::RowVectorXd mu;
    Eigen::RowVectorXd log_sigma;
    Eigen::RowVectorXd pre_tanh;
    Eigen::RowVectorXd squashed;  // tanh(u), the normalized action
    Eigen::RowVectorXd log_prob;
};

PolicySample sample_policy(const Mlp& policy, const Eigen::MatrixXd& obs, const Eigen::RowVectorXd& eps,
                           Tape* tape = nullptr);

/// min(Q1, Q2)(s, a) - alpha log pi(a | s) with a drawn from eps.
Eigen::RowVectorXd value_target(const Batch& batch, const SacNets& nets, const SacConfig& cfg,
                                const Eigen::RowVectorXd& eps);
Eigen::RowVectorXd value_target(const Batch& batch, const SacNets& nets, const SacConfig& cfg, Rng& rng);

LossAndGrad value_loss(const Batch& batch, const Mlp& value, const Eigen::RowVectorXd& targets);

/// mean(alpha log pi - Q(s, f(eps, s))). Gradients flow through the action
/// into the policy only.
LossAndGrad policy_loss(const Batch& batch, const SacNets& nets, const SacConfig& cfg,
                        const Eigen::RowVectorXd& eps);

/// target <- c * target + (1 - c) * online for every parameter.
void polyak_update(Mlp& target, const Mlp& online, double c);

Eigen::RowVectorXd standard_normal(Eigen::Index n, Rng& rng);

struct UpdateStats {
    double q1_loss = 0.0;
    double q2_loss = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;  // mean -log pi of the policy-loss samples
};

/// Owns the networks and their optimizers and runs one minibatch update:
/// all three losses are evaluated at the current parameters, then each
/// network takes one Adam step and the target value network is averaged.
class SacLearner {
public:
    SacLearner(SacNets nets, const SacConfig& cfg);

    /// Throws std::runtime_error if any loss or gradient is non-finite.
    UpdateStats update(const Batch& minibatch, Rng& rng);

    const SacNets& nets() const { return nets_; }
    SacNets& nets() { return nets_; }
    const SacConfig& config() const { return cfg_; }
    long adam_steps() const { return policy_opt_.step_count(); }

private:
    SacNets nets_;
    SacConfig cfg_;
    Adam policy_opt_;
    Adam value_opt_;
    Adam q1_opt_;
    Adam q2_opt_;
};

}  // namespace ssac

#endif  // SSAC_SAC_HPP
