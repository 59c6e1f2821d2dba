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

#ifndef SSAC_TESTS_GRADCHECK_HPP
#define SSAC_TESTS_GRADCHECK_HPP

#include <algorithm>
#include <functional>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "ssac/nn.hpp"

namespace gradcheck {

/// He-uniform weights plus small random biases, so bias gradients are exercised.
inline void randomize(ssac::Mlp& net, ssac::Rng& rng) {
    net.init_he_uniform(rng);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (auto& layer : net.layers()) {
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = u(rng);
    }
}

/// Addresses of every parameter of net, in flatten() order.
inline std::vector<double*> parameter_addresses(ssac::Mlp& net) {
    std::vector<double*> out;
    for (auto& layer : net.layers()) {
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) out.push_back(&layer.weight(r, c));
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) out.push_back(&layer.bias(r));
    }
    return out;
}

/// Relative error between an analytic gradient and central differences of
/// loss over every parameter of net. net is perturbed in place and restored.
inline double parameter_error(ssac::Mlp& net, const std::function<double()>& loss, const ssac::Gradients& analytic,
                              double h = 1e-5) {
    const std::vector<double*> params = parameter_addresses(net);
    std::vector<double> fd(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double orig = *params[i];
        *params[i] = orig + h;
        const double fp = loss();
        *params[i] = orig - h;
        const double fm = loss();
        *params[i] = orig;
        fd[i] = (fp - fm) / (2.0 * h);
    }
    return oracle::relative_error(analytic.flatten(), fd);
}

/// parameter_error restricted to `count` parameters drawn without replacement.
inline double sampled_parameter_error(ssac::Mlp& net, const std::function<double()>& loss,
                                      const ssac::Gradients& analytic, std::size_t count, ssac::Rng& rng,
                                      double h = 1e-5) {
    const std::vector<double*> params = parameter_addresses(net);
    const std::vector<double> full = analytic.flatten();
    std::vector<std::size_t> index(params.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    std::shuffle(index.begin(), index.end(), rng);
    index.resize(std::min(count, index.size()));
    std::vector<double> a, fd;
    for (std::size_t i : index) {
        const double orig = *params[i];
        *params[i] = orig + h;
        const double fp = loss();
        *params[i] = orig - h;
        const double fm = loss();
        *params[i] = orig;
        fd.push_back((fp - fm) / (2.0 * h));
        a.push_back(full[i]);
    }
    return oracle::relative_error(a, fd);
}

/// Distance of the evaluation point from the nearest non-differentiable
/// point of net on inputs x: ReLU hinges and the log-sigma clamp. Central
/// differences straddling such a point measure an average slope, so the
/// checks only use configurations with a comfortable margin.
inline double kink_margin(const ssac::Mlp& net, const Eigen::MatrixXd& x) {
    ssac::Tape tape;
    net.forward(x, &tape);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < tape.pre_activations.size(); ++k) {
        margin = std::min(margin, tape.pre_activations[k].cwiseAbs().minCoeff());
    }
    if (net.head() == ssac::Head::kGaussian) {
        const Eigen::RowVectorXd ls = tape.pre_activations.back().row(1);
        margin = std::min(margin, (ls.array() - ssac::kLogSigmaMin).abs().minCoeff());
        margin = std::min(margin, (ls.array() - ssac::kLogSigmaMax).abs().minCoeff());
    }
    return margin;
}

inline constexpr double kKinkMargin = 1e-3;

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, ssac::Rng& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = u(rng);
    return m;
}

}  // namespace gradcheck

#endif  // SSAC_TESTS_GRADCHECK_HPP
