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

#include "ssac/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssac {

namespace {

constexpr int kFormatVersion = 1;

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
    });
}

}  // namespace

std::string to_string(Head head) {
    switch (head) {
        case Head::kIdentity: return "identity";
        case Head::kSigmoid: return "sigmoid";
        case Head::kGaussian: return "gaussian";
    }
    return "identity";
}

Head head_from_string(const std::string& name) {
    if (name == "identity") return Head::kIdentity;
    if (name == "sigmoid") return Head::kSigmoid;
    if (name == "gaussian") return Head::kGaussian;
    throw std::runtime_error("unknown network head '" + name + "'");
}

Gradients& Gradients::operator+=(const Gradients& other) {
    for (std::size_t i = 0; i < weight.size(); ++i) {
        weight[i] += other.weight[i];
        bias[i] += other.bias[i];
    }
    return *this;
}

Gradients& Gradients::operator*=(double factor) {
    for (std::size_t i = 0; i < weight.size(); ++i) {
        weight[i] *= factor;
        bias[i] *= factor;
    }
    return *this;
}

bool Gradients::all_finite() const {
    for (std::size_t i = 0; i < weight.size(); ++i) {
        if (!weight[i].allFinite() || !bias[i].allFinite()) return false;
    }
    return true;
}

std::vector<double> Gradients::flatten() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        for (Eigen::Index r = 0; r < weight[i].rows(); ++r) {
            for (Eigen::Index c = 0; c < weight[i].cols(); ++c) out.push_back(weight[i](r, c));
        }
        for (Eigen::Index r = 0; r < bias[i].size(); ++r) out.push_back(bias[i](r));
    }
    return out;
}

Mlp::Mlp(std::vector<int> sizes, Head head) : sizes_(std::move(sizes)), head_(head) {
    if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least an input and an output size");
    for (int s : sizes_) {
        if (s <= 0) throw std::invalid_argument("Mlp layer sizes must be positive");
    }
    if (head_ == Head::kGaussian && sizes_.back() != 2) {
        throw std::invalid_argument("gaussian head needs exactly two outputs");
    }
    if (head_ == Head::kSigmoid && sizes_.back() != 1) {
        throw std::invalid_argument("sigmoid head needs exactly one output");
    }
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
        layers_.push_back({Eigen::MatrixXd::Zero(sizes_[i + 1], sizes_[i]), Eigen::VectorXd::Zero(sizes_[i + 1])});
    }
}

void Mlp::init_he_uniform(Rng& rng) {
    for (auto& layer : layers_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.weight.cols()));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = dist(rng);
        }
        layer.bias.setZero();
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Tape* tape) const {
    if (x.rows() != input_size()) {
        throw std::invalid_argument("Mlp::forward: expected " + std::to_string(input_size()) + " inputs, got "
                                    + std::to_string(x.rows()));
    }
    if (tape != nullptr) {
        tape->inputs.clear();
        tape->pre_activations.clear();
    }
    Eigen::MatrixXd a = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::MatrixXd z = layers_[i].weight * a;
        z.colwise() += layers_[i].bias;
        if (tape != nullptr) {
            tape->inputs.push_back(std::move(a));
            tape->pre_activations.push_back(z);
        }
        if (i + 1 < layers_.size()) {
            a = z.cwiseMax(0.0);
            continue;
        }
        switch (head_) {
            case Head::kIdentity: a = std::move(z); break;
            case Head::kSigmoid: a = sigmoid(z); break;
            case Head::kGaussian:
                a = std::move(z);
                a.row(1) = a.row(1).cwiseMax(kLogSigmaMin).cwiseMin(kLogSigmaMax);
                break;
        }
    }
    if (tape != nullptr) tape->output = a;
    return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
    return forward(Eigen::MatrixXd(x), nullptr).col(0);
}

Gradients Mlp::backward(const Tape& tape, const Eigen::MatrixXd& upstream, Eigen::MatrixXd* input_grad) const {
    if (tape.empty() || tape.inputs.size() != layers_.size()) {
        throw std::logic_error("Mlp::backward called without a matching forward tape");
    }
    if (upstream.rows() != output_size() || upstream.cols() != tape.output.cols()) {
        throw std::invalid_argument("Mlp::backward: upstream gradient shape mismatch");
    }
    Eigen::MatrixXd delta = upstream;
    const Eigen::MatrixXd& z_out = tape.pre_activations.back();
    switch (head_) {
        case Head::kIdentity: break;
        case Head::kSigmoid:
            delta = delta.cwiseProduct(tape.output.cwiseProduct((1.0 - tape.output.array()).matrix()));
            break;
        case Head::kGaussian:
            for (Eigen::Index j = 0; j < delta.cols(); ++j) {
                const double z = z_out(1, j);
                if (z < kLogSigmaMin || z > kLogSigmaMax) delta(1, j) = 0.0;
            }
            break;
    }

    Gradients g = zeros_like();
    for (std::size_t k = layers_.size(); k-- > 0;) {
        g.weight[k].noalias() = delta * tape.inputs[k].transpose();
        g.bias[k] = delta.rowwise().sum();
        if (k > 0) {
            Eigen::MatrixXd back = layers_[k].weight.transpose() * delta;
            const Eigen::MatrixXd& z = tape.pre_activations[k - 1];
            delta = (z.array() > 0.0).select(back, 0.0);
        } else if (input_grad != nullptr) {
            *input_grad = layers_[k].weight.transpose() * delta;
        }
    }
    return g;
}

Gradients Mlp::zeros_like() const {
    Gradients g;
    for (const auto& layer : layers_) {
        g.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
        g.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
    }
    return g;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers_) n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
    return n;
}

std::vector<double> Mlp::flatten() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto& layer : layers_) {
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) out.push_back(layer.weight(r, c));
        }
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) out.push_back(layer.bias(r));
    }
    return out;
}

void Mlp::unflatten(std::span<const double> values) {
    if (values.size() != parameter_count()) throw std::invalid_argument("Mlp::unflatten: size mismatch");
    std::size_t i = 0;
    for (auto& layer : layers_) {
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = values[i++];
        }
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = values[i++];
    }
}

bool Mlp::all_finite() const {
    for (const auto& layer : layers_) {
        if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
    }
    return true;
}

Adam::Adam(const Mlp& net, Options options)
    : options_(options), m_(net.zeros_like()), v_(net.zeros_like()) {}

bool Adam::step(Mlp& net, const Gradients& grads) {
    if (grads.weight.size() != net.layers().size()) throw std::invalid_argument("Adam::step: shape mismatch");
    if (!grads.all_finite()) {
        ++rejected_;
        return false;
    }
    ++steps_;
    const double b1 = options_.beta1;
    const double b2 = options_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
    const double lr = options_.learning_rate;
    const double eps = options_.epsilon;
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
        param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    };
    for (std::size_t i = 0; i < grads.weight.size(); ++i) {
        auto& layer = net.layers()[i];
        update(layer.weight, m_.weight[i], v_.weight[i], grads.weight[i]);
        update(layer.bias, m_.bias[i], v_.bias[i], grads.bias[i]);
    }
    return true;
}

double log1m_tanh_sq(double u) {
    // 1 - tanh(u)^2 = 4 / (e^u + e^-u)^2
    const double a = std::abs(u);
    return 2.0 * (std::numbers::ln2 - a - std::log1p(std::exp(-2.0 * a)));
}

ActionSample sample_action(const GaussianHead& head, double eps) {
    const double log_sigma = std::clamp(head.log_sigma, kLogSigmaMin, kLogSigmaMax);
    const double u = head.mu + std::exp(log_sigma) * eps;
    const double log_normal = -0.5 * eps * eps - log_sigma - 0.5 * std::log(2.0 * std::numbers::pi);
    double action = head.torque_scale * std::tanh(u);
    // tanh rounds to +-1 for |u| beyond about 19; keep the action strictly inside the limit.
    if (std::abs(action) >= head.torque_scale) action = std::copysign(std::nextafter(head.torque_scale, 0.0), u);
    return {action, log_normal - log1m_tanh_sq(u), u};
}

nlohmann::json to_json(const Mlp& net) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : net.layers()) {
        std::vector<double> w;
        w.reserve(static_cast<std::size_t>(layer.weight.size()));
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) w.push_back(layer.weight(r, c));
        }
        std::vector<double> b(layer.bias.data(), layer.bias.data() + layer.bias.size());
        layers.push_back({{"weight", w}, {"bias", b}});
    }
    return {{"format_version", kFormatVersion},
            {"sizes", net.sizes()},
            {"head", to_string(net.head())},
            {"layers", layers}};
}

Mlp mlp_from_json(const nlohmann::json& record) {
    try {
        if (record.at("format_version").get<int>() != kFormatVersion) {
            throw std::runtime_error("unsupported network format version");
        }
        Mlp net(record.at("sizes").get<std::vector<int>>(), head_from_string(record.at("head").get<std::string>()));
        const auto& layers = record.at("layers");
        if (layers.size() != net.layers().size()) throw std::runtime_error("layer count does not match sizes");
        for (std::size_t i = 0; i < layers.size(); ++i) {
            auto& layer = net.layers()[i];
            const auto w = layers[i].at("weight").get<std::vector<double>>();
            const auto b = layers[i].at("bias").get<std::vector<double>>();
            if (w.size() != static_cast<std::size_t>(layer.weight.size())
                || b.size() != static_cast<std::size_t>(layer.bias.size())) {
                throw std::runtime_error("layer " + std::to_string(i) + " has the wrong number of values");
            }
            std::size_t k = 0;
            for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
                for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = w[k++];
            }
            for (std::size_t r = 0; r < b.size(); ++r) layer.bias(static_cast<Eigen::Index>(r)) = b[r];
        }
        if (!net.all_finite()) throw std::runtime_error("non-finite weights");
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed network record: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("malformed network record: ") + e.what());
    }
}

Mlp mlp_from_json(const nlohmann::json& record, const std::vector<int>& sizes, Head head) {
    Mlp net = mlp_from_json(record);
    if (net.sizes() != sizes || net.head() != head) {
        throw std::runtime_error("network record topology does not match the expected network");
    }
    return net;
}

}  // namespace ssac
