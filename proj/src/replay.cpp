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

#include "ssac/replay.hpp"

namespace ssac {

ReplayStore::ReplayStore(Capacities capacities) : general_(capacities.general), gate_(capacities.gate) {}

void ReplayStore::add_episode(std::span<const Transition> episode, bool success) {
    for (const auto& t : episode) general_.push(t);
    if (success) success_.insert(success_.end(), episode.begin(), episode.end());
}

void ReplayStore::add_gate_samples(std::span<const State> states, bool label) {
    for (const auto& s : states) gate_.push({s, label});
}

std::vector<Transition> ReplayStore::sample_batch(std::size_t n, double p_success, Rng& rng) const {
    if (general_.empty() && success_.empty()) throw std::runtime_error("sample_batch: replay buffers are empty");
    if (p_success < 0.0 || p_success > 1.0) throw std::invalid_argument("sample_batch: p_success outside [0, 1]");
    std::bernoulli_distribution from_success(p_success);
    std::vector<Transition> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool use_success = from_success(rng);
        if (success_.empty()) use_success = false;
        if (general_.empty()) use_success = true;
        if (use_success) {
            std::uniform_int_distribution<std::size_t> pick(0, success_.size() - 1);
            out.push_back(success_[pick(rng)]);
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, general_.size() - 1);
            out.push_back(general_[pick(rng)]);
        }
    }
    return out;
}

}  // namespace ssac
