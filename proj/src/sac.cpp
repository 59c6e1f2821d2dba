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

#include "ssac/sac.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ssac/observation.hpp"

namespace ssac {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

Mlp make_net(int inputs, int outputs, Head head, Rng& rng) {
    Mlp net({inputs, kHiddenWidth, kHiddenWidth, kHiddenWidth, outputs}, head);
    net.init_he_uniform(rng);
    return net;
}

}  // namespace

void SacConfig::validate() const {
    if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("discount must lie in (0, 1)");
    if (!(polyak > 0.0 && polyak < 1.0)) throw std::invalid_argument("polyak constant must lie in (0, 1)");
    if (!(success_prob >= 0.0 && success_prob <= 1.0)) {
        throw std::invalid_argument("success sampling probability must lie in [0, 1]");
    }
    if (!(alpha >= 0.0)) throw std::invalid_argument("entropy coefficient must be non-negative");
    if (replay_batch <= 0 || minibatch <= 0 || updates_per_event < 0) {
        throw std::invalid_argument("batch sizes must be positive");
    }
    if (replay_batch % minibatch != 0) throw std::invalid_argument("replay batch must be a multiple of the minibatch");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(torque_limit > 0.0)) throw std::invalid_argument("torque limit must be positive");
}

SacNets SacNets::create(Rng& rng) {
    SacNets n;
    n.policy = make_net(kObservationSize, 2, Head::kGaussian, rng);
    n.value = make_net(kObservationSize, 1, Head::kIdentity, rng);
    n.target_value = n.value;
    n.q1 = make_net(kObservationSize + 1, 1, Head::kIdentity, rng);
    n.q2 = make_net(kObservationSize + 1, 1, Head::kIdentity, rng);
    return n;
}

Batch Batch::from(std::span<const Transition> transitions, double torque_limit) {
    const auto n = static_cast<Eigen::Index>(transitions.size());
    Batch b;
    b.obs.resize(kObservationSize, n);
    b.next_obs.resize(kObservationSize, n);
    b.action.resize(n);
    b.reward.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Transition& t = transitions[static_cast<std::size_t>(j)];
        b.obs.col(j) = observe(t.state);
        b.next_obs.col(j) = observe(t.next_state);
        b.action(j) = t.action / torque_limit;
        b.reward(j) = t.reward;
    }
    return b;
}

Eigen::MatrixXd critic_input(const Eigen::MatrixXd& obs, const Eigen::RowVectorXd& action) {
    Eigen::MatrixXd x(obs.rows() + 1, obs.cols());
    x.topRows(obs.rows()) = obs;
    x.bottomRows(1) = action;
    return x;
}

Eigen::RowVectorXd q_target(const Batch& batch, const SacNets& nets, const SacConfig& cfg) {
    return batch.reward + cfg.discount * nets.target_value.forward(batch.next_obs).row(0);
}

namespace {

LossAndGrad half_squared_error(const Mlp& net, const Eigen::MatrixXd& x, const Eigen::RowVectorXd& targets) {
    Tape tape;
    const Eigen::RowVectorXd pred = net.forward(x, &tape).row(0);
    const Eigen::RowVectorXd diff = pred - targets;
    const double n = static_cast<double>(diff.size());
    LossAndGrad out;
    out.loss = 0.5 * diff.squaredNorm() / n;
    out.grad = net.backward(tape, diff / n);
    return out;
}

}  // namespace

QLoss q_loss(const Batch& batch, const SacNets& nets, const Eigen::RowVectorXd& targets) {
    const Eigen::MatrixXd x = critic_input(batch.obs, batch.action);
    return {half_squared_error(nets.q1, x, targets), half_squared_error(nets.q2, x, targets)};
}

QLoss q_loss(const Batch& batch, const SacNets& nets, const SacConfig& cfg) {
    return q_loss(batch, nets, q_target(batch, nets, cfg));
}

PolicySample sample_policy(const Mlp& policy, const Eigen::MatrixXd& obs, const Eigen::RowVectorXd& eps,
                           Tape* tape) {
    if (eps.size() != obs.cols()) throw std::invalid_argument("sample_policy: one noise value per state expected");
    const Eigen::MatrixXd out = policy.forward(obs, tape);
    PolicySample s;
    s.mu = out.row(0);
    s.log_sigma = out.row(1);
    const Eigen::Index n = obs.cols();
    s.pre_tanh.resize(n);
    s.squashed.resize(n);
    s.log_prob.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double u = s.mu(j) + std::exp(s.log_sigma(j)) * eps(j);
        s.pre_tanh(j) = u;
        s.squashed(j) = std::tanh(u);
        s.log_prob(j) = -0.5 * eps(j) * eps(j) - s.log_sigma(j) - kHalfLog2Pi - log1m_tanh_sq(u);
    }
    return s;
}

Eigen::RowVectorXd value_target(const Batch& batch, const SacNets& nets, const SacConfig& cfg,
                                const Eigen::RowVectorXd& eps) {
    const PolicySample s = sample_policy(nets.policy, batch.obs, eps);
    const Eigen::MatrixXd x = critic_input(batch.obs, s.squashed);
    const Eigen::RowVectorXd q1 = nets.q1.forward(x).row(0);
    const Eigen::RowVectorXd q2 = nets.q2.forward(x).row(0);
    return q1.cwiseMin(q2) - cfg.alpha * s.log_prob;
}

Eigen::RowVectorXd value_target(const Batch& batch, const SacNets& nets, const SacConfig& cfg, Rng& rng) {
    return value_target(batch, nets, cfg, standard_normal(batch.size(), rng));
}

LossAndGrad value_loss(const Batch& batch, const Mlp& value, const Eigen::RowVectorXd& targets) {
    return half_squared_error(value, batch.obs, targets);
}

LossAndGrad policy_loss(const Batch& batch, const SacNets& nets, const SacConfig& cfg,
                        const Eigen::RowVectorXd& eps) {
    Tape policy_tape;
    const PolicySample s = sample_policy(nets.policy, batch.obs, eps, &policy_tape);
    const Eigen::MatrixXd x = critic_input(batch.obs, s.squashed);
    const Eigen::Index n = batch.size();

    Tape t1;
    Tape t2;
    const Eigen::RowVectorXd q1 = nets.q1.forward(x, &t1).row(0);
    const Eigen::RowVectorXd q2 = nets.q2.forward(x, &t2).row(0);

    // Per-sample selector: which critic's value (and slope) the loss uses.
    Eigen::RowVectorXd pick1 = Eigen::RowVectorXd::Ones(n);
    if (cfg.policy_critic == PolicyCritic::kMin) {
        for (Eigen::Index j = 0; j < n; ++j) pick1(j) = q1(j) <= q2(j) ? 1.0 : 0.0;
    }
    const Eigen::RowVectorXd pick2 = Eigen::RowVectorXd::Ones(n) - pick1;
    const Eigen::RowVectorXd q = pick1.cwiseProduct(q1) + pick2.cwiseProduct(q2);

    Eigen::RowVectorXd dq_da = Eigen::RowVectorXd::Zero(n);
    Eigen::MatrixXd dx;
    nets.q1.backward(t1, pick1, &dx);
    dq_da += dx.bottomRows(1);
    if (pick2.any()) {
        nets.q2.backward(t2, pick2, &dx);
        dq_da += dx.bottomRows(1);
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    LossAndGrad out;
    out.loss = (cfg.alpha * s.log_prob - q).sum() * inv_n;

    Eigen::MatrixXd upstream(2, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double t = s.squashed(j);
        // d log pi / du = 2 tanh(u); d tanh(u) / du = 1 - tanh(u)^2
        const double dl_du = (cfg.alpha * 2.0 * t - dq_da(j) * (1.0 - t * t)) * inv_n;
        upstream(0, j) = dl_du;
        upstream(1, j) = dl_du * std::exp(s.log_sigma(j)) * eps(j) - cfg.alpha * inv_n;
    }
    out.grad = nets.policy.backward(policy_tape, upstream);
    return out;
}

void polyak_update(Mlp& target, const Mlp& online, double c) {
    if (!target.same_topology(online)) throw std::invalid_argument("polyak_update: topology mismatch");
    for (std::size_t i = 0; i < target.layers().size(); ++i) {
        auto& t = target.layers()[i];
        const auto& o = online.layers()[i];
        t.weight = c * t.weight + (1.0 - c) * o.weight;
        t.bias = c * t.bias + (1.0 - c) * o.bias;
    }
}

Eigen::RowVectorXd standard_normal(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::RowVectorXd eps(n);
    for (Eigen::Index j = 0; j < n; ++j) eps(j) = normal(rng);
    return eps;
}

SacLearner::SacLearner(SacNets nets, const SacConfig& cfg)
    : nets_(std::move(nets)),
      cfg_(cfg),
      policy_opt_(nets_.policy, {cfg.learning_rate}),
      value_opt_(nets_.value, {cfg.learning_rate}),
      q1_opt_(nets_.q1, {cfg.learning_rate}),
      q2_opt_(nets_.q2, {cfg.learning_rate}) {}

UpdateStats SacLearner::update(const Batch& minibatch, Rng& rng) {
    const Eigen::RowVectorXd value_eps = standard_normal(minibatch.size(), rng);
    const Eigen::RowVectorXd policy_eps = standard_normal(minibatch.size(), rng);

    const QLoss q = q_loss(minibatch, nets_, cfg_);
    const LossAndGrad pi = policy_loss(minibatch, nets_, cfg_, policy_eps);
    const LossAndGrad v = value_loss(minibatch, nets_.value, value_target(minibatch, nets_, cfg_, value_eps));

    UpdateStats stats{q.q1.loss, q.q2.loss, pi.loss, v.loss,
                      -sample_policy(nets_.policy, minibatch.obs, policy_eps).log_prob.mean()};
    if (!std::isfinite(stats.q1_loss) || !std::isfinite(stats.q2_loss) || !std::isfinite(stats.policy_loss)
        || !std::isfinite(stats.value_loss)) {
        throw std::runtime_error("non-finite SAC loss");
    }
    if (!q1_opt_.step(nets_.q1, q.q1.grad) || !q2_opt_.step(nets_.q2, q.q2.grad)
        || !policy_opt_.step(nets_.policy, pi.grad) || !value_opt_.step(nets_.value, v.grad)) {
        throw std::runtime_error("non-finite SAC gradient");
    }
    polyak_update(nets_.target_value, nets_.value, cfg_.polyak);
    return stats;
}

}  // namespace ssac
