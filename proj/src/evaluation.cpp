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

#include "ssac/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace ssac {

std::vector<double> grid_points(int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * i / n);
    return out;
}

std::vector<BalanceCell> balance_map(const Agent& agent, const BalanceMapSpec& spec, const AcrobotParams& params,
                                     const GoalSpec& goal) {
    spec.validate();
    Rng unused(0);
    std::vector<BalanceCell> cells;
    for (double t1 : grid_points(spec.n_theta1)) {
        for (double t2 : grid_points(spec.n_theta2)) {
            const EpisodeRecord ep = do_rollout(agent, {t1, t2, 0.0, 0.0}, RolloutMode::kDeterministic, params, goal,
                                                unused);
            cells.push_back({t1, t2, ep.success});
        }
    }
    return cells;
}

double success_rate(std::span<const BalanceCell> cells) {
    if (cells.empty()) return 0.0;
    const auto n = std::count_if(cells.begin(), cells.end(), [](const BalanceCell& c) { return c.success; });
    return static_cast<double>(n) / static_cast<double>(cells.size());
}

double GateMetrics::precision() const {
    const long predicted = true_pos + false_pos;
    return predicted > 0 ? static_cast<double>(true_pos) / static_cast<double>(predicted)
                         : std::numeric_limits<double>::quiet_NaN();
}

double GateMetrics::recall() const {
    const long actual = true_pos + false_neg;
    return actual > 0 ? static_cast<double>(true_pos) / static_cast<double>(actual)
                      : std::numeric_limits<double>::quiet_NaN();
}

double GateMetrics::engage_false_positive_rate() const {
    const long negatives = false_pos + true_neg;
    return negatives > 0 ? static_cast<double>(engage_false_pos) / static_cast<double>(negatives)
                         : std::numeric_limits<double>::quiet_NaN();
}

GateMetrics evaluate_gate(const Mlp& gate, const GateConfig& cfg, const LqrGains& gains, const AcrobotParams& params,
                          const GoalSpec& goal, int episodes, int stride, Rng& rng) {
    GateMetrics m;
    const int step = std::max(stride, 1);
    for (int e = 0; e < episodes; ++e) {
        const LqrEpisode ep = lqr_rollout(sample_initial_state(rng), gains, goal, params);
        const int decisions = static_cast<int>(ep.states.size()) - 1;
        for (int t = 0; t < std::max(decisions, 1); t += step) {
            const State& s = ep.states[static_cast<std::size_t>(t)];
            const bool truth = basin_label(s, gains, goal, params);
            const double g = gate_forward(gate, s);
            const bool predicted = g > 0.5;
            const bool engage = g > cfg.on_threshold;
            if (predicted) {
                truth ? ++m.true_pos : ++m.false_pos;
            } else {
                truth ? ++m.false_neg : ++m.true_neg;
            }
            if (engage) truth ? ++m.engage_true_pos : ++m.engage_false_pos;
        }
    }
    return m;
}

RareEventResult rare_event_rate(const LqrGains& gains, double torque_limit, const AcrobotParams& params,
                                const GoalSpec& goal, long episodes, int samples_per_episode, Rng& rng) {
    Agent random_agent;
    random_agent.gate_mode = GateMode::kAlwaysOff;
    random_agent.lqr = gains;
    random_agent.torque_limit = torque_limit;

    RareEventResult r;
    std::vector<std::size_t> idx;
    for (long e = 0; e < episodes; ++e) {
        const EpisodeRecord ep =
            do_rollout(random_agent, sample_initial_state(rng), RolloutMode::kRandomExplore, params, goal, rng);
        idx.resize(ep.states.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        const std::size_t k = std::min(idx.size(), static_cast<std::size_t>(samples_per_episode));
        bool hit = false;
        for (std::size_t i = 0; i < k && !hit; ++i) hit = basin_label(ep.states[idx[i]], gains, goal, params);
        ++r.episodes;
        if (hit) ++r.hits;
    }
    return r;
}

double trailing_mean(std::span<const double> values, std::size_t window) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t n = std::min(window, values.size());
    const auto tail = values.subspan(values.size() - n);
    return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(n);
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd r;
    if (values.empty()) return r;
    r.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - r.mean) * (v - r.mean);
        r.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return r;
}

}  // namespace ssac
