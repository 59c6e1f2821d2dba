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

#ifndef SSAC_NN_HPP
#define SSAC_NN_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ssac/dynamics.hpp"

namespace ssac {

/// How the last dense layer is interpreted.
enum class Head {
    kIdentity,
    /// Elementwise logistic on the single output.
    kSigmoid,
    /// Two outputs: mean and log standard deviation, the latter clamped to
    /// [kLogSigmaMin, kLogSigmaMax].
    kGaussian,
};

inline constexpr double kLogSigmaMin = -20.0;
inline constexpr double kLogSigmaMax = 2.0;

std::string to_string(Head head);
Head head_from_string(const std::string& name);

struct DenseLayer {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;
};

/// Per-layer values recorded by forward() and consumed by backward().
/// Columns are batch samples.
struct Tape {
    std::vector<Eigen::MatrixXd> inputs;
    std::vector<Eigen::MatrixXd> pre_activations;
    Eigen::MatrixXd output;

    bool empty() const { return inputs.empty(); }
};

/// Parameter-shaped storage, used for gradients and Adam moments.
struct Gradients {
    std::vector<Eigen::MatrixXd> weight;
    std::vector<Eigen::VectorXd> bias;

    Gradients& operator+=(const Gradients& other);
    Gradients& operator*=(double factor);
    bool all_finite() const;
    std::vector<double> flatten() const;
};

/**
 * Fully connected network with ReLU hidden activations.
 *
 * Inputs and outputs are column-major batches: a forward pass on an
 * (inputs x batch) matrix returns an (outputs x batch) matrix.
 */
class Mlp {
public:
    Mlp() = default;
    /// sizes = {inputs, hidden..., outputs}; at least one layer.
    Mlp(std::vector<int> sizes, Head head);

    /// Uniform fan-in scaled initialization, biases zero.
    void init_he_uniform(Rng& rng);

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape* tape = nullptr) const;
    Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

    /// Gradients of sum_ij upstream(i, j) * output(i, j) with respect to every
    /// parameter. When input_grad is non-null it receives d/d(input).
    /// Throws std::logic_error on an empty tape.
    Gradients backward(const Tape& tape, const Eigen::MatrixXd& upstream,
                       Eigen::MatrixXd* input_grad = nullptr) const;

    Gradients zeros_like() const;

    const std::vector<int>& sizes() const { return sizes_; }
    Head head() const { return head_; }
    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    std::size_t parameter_count() const;

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    std::vector<double> flatten() const;
    void unflatten(std::span<const double> values);

    bool same_topology(const Mlp& other) const { return sizes_ == other.sizes_ && head_ == other.head_; }
    bool all_finite() const;

private:
    std::vector<int> sizes_;
    Head head_ = Head::kIdentity;
    std::vector<DenseLayer> layers_;
};

/// Adam with bias correction.
class Adam {
public:
    struct Options {
        double learning_rate = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;
    };

    Adam() = default;
    Adam(const Mlp& net, Options options);

    /// Applies one update. A gradient with any non-finite entry is rejected:
    /// the network and moments are left untouched and false is returned.
    [[nodiscard]] bool step(Mlp& net, const Gradients& grads);

    long step_count() const { return steps_; }
    long rejected_count() const { return rejected_; }
    const Options& options() const { return options_; }
    const Gradients& first_moment() const { return m_; }
    const Gradients& second_moment() const { return v_; }

private:
    Options options_;
    Gradients m_;
    Gradients v_;
    long steps_ = 0;
    long rejected_ = 0;
};

/// Squashed Gaussian policy output for a scalar action.
struct GaussianHead {
    double mu = 0.0;
    double log_sigma = 0.0;
    double torque_scale = 1.0;
};

struct ActionSample {
    double action = 0.0;     // torque_scale * tanh(u)
    double log_prob = 0.0;   // log density of tanh(u) on (-1, 1)
    double pre_tanh = 0.0;   // u = mu + sigma * eps
};

/// Reparameterized draw. eps = 0 gives the deterministic action.
ActionSample sample_action(const GaussianHead& head, double eps);

/// log(1 - tanh(u)^2), stable for large |u|.
double log1m_tanh_sq(double u);

nlohmann::json to_json(const Mlp& net);
/// Throws std::runtime_error on a malformed or version-mismatched record.
Mlp mlp_from_json(const nlohmann::json& record);
/// As above, additionally requiring the given topology.
Mlp mlp_from_json(const nlohmann::json& record, const std::vector<int>& sizes, Head head);

}  // namespace ssac

#endif  // SSAC_NN_HPP
