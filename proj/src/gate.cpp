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

#include "ssac/gate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ssac/observation.hpp"

namespace ssac {

void GateConfig::validate() const {
    if (!(class_weight > 0.0)) throw std::invalid_argument("gate class weight factor must be positive");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("gate learning rate must be positive");
    if (!(off_threshold < on_threshold) || off_threshold < 0.0 || on_threshold > 1.0) {
        throw std::invalid_argument("gate hysteresis needs 0 <= off < on <= 1");
    }
    if (update_period <= 0 || minibatch <= 0) throw std::invalid_argument("gate period and minibatch must be positive");
}

Hysteresis::Hysteresis(double on_threshold, double off_threshold) : on_(on_threshold), off_(off_threshold) {
    if (!(off_ < on_)) throw std::invalid_argument("hysteresis off threshold must be below the on threshold");
}

bool Hysteresis::update(double g) {
    if (!engaged_ && g > on_) {
        engaged_ = true;
    } else if (engaged_ && g < off_) {
        engaged_ = false;
    }
    return engaged_;
}

Mlp make_gate_network(Rng& rng) {
    Mlp net({kObservationSize, 32, 32, 1}, Head::kSigmoid);
    net.init_he_uniform(rng);
    return net;
}

double gate_forward(const Mlp& net, const State& s) {
    return net.forward(Eigen::VectorXd(observe(s)))(0);
}

double positive_class_weight(std::size_t n_total, std::size_t n_positive, double w) {
    if (n_positive == 0) throw std::invalid_argument("positive_class_weight: no positive samples");
    return static_cast<double>(n_total) / static_cast<double>(n_positive) * w;
}

GateLoss gate_loss(std::span<const GateSample> samples, const Mlp& net, double positive_weight) {
    if (samples.empty()) throw std::invalid_argument("gate_loss: empty dataset");
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd x(kObservationSize, n);
    for (Eigen::Index j = 0; j < n; ++j) x.col(j) = observe(samples[static_cast<std::size_t>(j)].state);

    Tape tape;
    const Eigen::RowVectorXd g = net.forward(x, &tape).row(0);
    const double inv_n = 1.0 / static_cast<double>(n);
    constexpr double lo = kProbabilityClamp;
    constexpr double hi = 1.0 - kProbabilityClamp;

    GateLoss out;
    out.class_weight = positive_weight;
    Eigen::RowVectorXd upstream(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double p = std::clamp(g(j), lo, hi);
        const bool clamped = g(j) < lo || g(j) > hi;
        if (samples[static_cast<std::size_t>(j)].label) {
            ++out.positives;
            out.loss -= positive_weight * std::log(p);
            upstream(j) = clamped ? 0.0 : -positive_weight / p * inv_n;
        } else {
            out.loss -= std::log(1.0 - p);
            upstream(j) = clamped ? 0.0 : 1.0 / (1.0 - p) * inv_n;
        }
    }
    out.loss *= inv_n;
    out.grad = net.backward(tape, upstream);
    return out;
}

std::optional<GateLoss> gate_loss(std::span<const GateSample> samples, const Mlp& net, const GateConfig& cfg) {
    if (samples.empty()) throw std::invalid_argument("gate_loss: empty dataset");
    const auto positives = static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const GateSample& s) { return s.label; }));
    if (positives == 0) return std::nullopt;
    return gate_loss(samples, net, positive_class_weight(samples.size(), positives, cfg.class_weight));
}

std::optional<double> dataset_class_weight(std::span<const GateSample> samples, double w) {
    const auto positives = static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const GateSample& s) { return s.label; }));
    if (positives == 0) return std::nullopt;
    return positive_class_weight(samples.size(), positives, w);
}

GateEpoch train_gate_epoch(std::span<const GateSample> samples, Mlp& net, Adam& opt, const GateConfig& cfg,
                           Rng& rng) {
    const std::optional<double> weight = dataset_class_weight(samples, cfg.class_weight);
    if (!weight) return {};
    return train_gate_epoch(samples, net, opt, cfg, *weight, rng);
}

GateEpoch train_gate_epoch(std::span<const GateSample> samples, Mlp& net, Adam& opt, const GateConfig& cfg,
                           double weight, Rng& rng) {
    GateEpoch epoch;
    if (samples.empty()) return epoch;

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    // The minibatch means sum, in expectation, to the full-dataset gradient.
    epoch.skipped = false;
    double loss_sum = 0.0;
    std::vector<GateSample> mb;
    const auto mb_size = static_cast<std::size_t>(cfg.minibatch);
    for (std::size_t start = 0; start < order.size(); start += mb_size) {
        const std::size_t end = std::min(order.size(), start + mb_size);
        mb.clear();
        for (std::size_t i = start; i < end; ++i) mb.push_back(samples[order[i]]);
        const GateLoss l = gate_loss(mb, net, weight);
        loss_sum += l.loss * static_cast<double>(mb.size());
        if (opt.step(net, l.grad)) ++epoch.adam_steps;
    }
    epoch.mean_loss = loss_sum / static_cast<double>(samples.size());
    return epoch;
}

PretrainProgress pretrain_gate(const AcrobotParams& params, const GoalSpec& goal, const LqrGains& gains,
                               const GateConfig& cfg, long steps, Mlp& net, Adam& opt, ReplayStore& store,
                               Rng& rng, const std::function<void(const PretrainProgress&)>& on_epoch) {
    PretrainProgress progress;
    long next_update = cfg.update_period;
    while (progress.steps < steps) {
        const LqrEpisode ep = lqr_rollout(sample_initial_state(rng), gains, goal, params);
        // Label every state at which a decision was taken: s_0 .. s_{N-1}.
        const std::size_t visited = ep.states.size() - 1;
        store.add_gate_samples(std::span<const State>(ep.states).first(std::max<std::size_t>(visited, 1)),
                               ep.success);
        progress.steps += static_cast<long>(visited == 0 ? 1 : visited);
        ++progress.episodes;
        if (ep.success) ++progress.positive_episodes;
        while (progress.steps >= next_update) {
            progress.last_epoch = train_gate_epoch(store.gate().items(), net, opt, cfg, rng);
            next_update += cfg.update_period;
            if (on_epoch) on_epoch(progress);
        }
    }
    return progress;
}

}  // namespace ssac
