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

#ifndef SSAC_REPLAY_HPP
#define SSAC_REPLAY_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ssac/dynamics.hpp"

namespace ssac {

struct Transition {
    State state;
    double action = 0.0;  // applied torque, N*m
    double reward = 0.0;  // reward(next_state)
    State next_state;
    bool gate_active = false;
};

/// A visited state with its episode-level success label.
struct GateSample {
    State state;
    bool label = false;
};

/// Fixed-capacity ring; once full, the oldest element is overwritten.
template <class T>
class RingBuffer {
public:
    explicit RingBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity_ == 0) throw std::invalid_argument("RingBuffer capacity must be positive");
    }

    void push(const T& value) {
        if (data_.size() < capacity_) {
            data_.push_back(value);
        } else {
            data_[next_] = value;
        }
        next_ = (next_ + 1) % capacity_;
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return data_.empty(); }
    const T& operator[](std::size_t i) const { return data_[i]; }
    /// Storage order, not insertion order.
    std::span<const T> items() const { return data_; }

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<T> data_;
};

/**
 * General transition ring, unbounded success buffer, and the gate dataset.
 *
 * Each sampled transition independently comes from the success buffer with
 * probability p_success and from the general buffer otherwise; when one of
 * the two is empty every draw falls back to the other.
 */
class ReplayStore {
public:
    struct Capacities {
        std::size_t general = 1'000'000;
        std::size_t gate = 1'000'000;
    };

    ReplayStore() : ReplayStore(Capacities{}) {}
    explicit ReplayStore(Capacities capacities);

    /// Every episode enters the general buffer; successful ones are also
    /// appended to the success buffer.
    void add_episode(std::span<const Transition> episode, bool success);
    void add_gate_samples(std::span<const State> states, bool label);

    /// Throws std::runtime_error when both buffers are empty.
    std::vector<Transition> sample_batch(std::size_t n, double p_success, Rng& rng) const;

    const RingBuffer<Transition>& general() const { return general_; }
    const std::vector<Transition>& success() const { return success_; }
    const RingBuffer<GateSample>& gate() const { return gate_; }

private:
    RingBuffer<Transition> general_;
    std::vector<Transition> success_;
    RingBuffer<GateSample> gate_;
};

}  // namespace ssac

#endif  // SSAC_REPLAY_HPP
