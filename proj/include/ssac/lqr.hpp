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

#ifndef SSAC_LQR_HPP
#define SSAC_LQR_HPP

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ssac/dynamics.hpp"

namespace ssac {

/// Balance controller u = -K e on the wrapped goal error e, optionally
/// clamped to [-saturation, saturation].
struct LqrGains {
    Eigen::RowVector4d K{-1649.8, -460.2, -716.1, -278.2};
    Eigen::Matrix4d Q = default_state_cost();
    double R = 0.5;
    double saturation = std::numeric_limits<double>::infinity();

    static Eigen::Matrix4d default_state_cost();
    void validate() const;
};

/// Goal error with both angle components wrapped to [-pi, pi).
Eigen::Vector4d wrapped_error(const State& s, const GoalSpec& g);

double lqr_action(const State& s, const LqrGains& gains, const GoalSpec& g);

struct Linearization {
    Eigen::Matrix4d A;
    Eigen::Vector4d B;
};

/// Continuous-time Jacobians at (goal, tau = 0). Throws std::invalid_argument
/// if the goal is not an equilibrium.
Linearization linearize(const AcrobotParams& p, const GoalSpec& g);

/// Solves A^T X + X A + M = 0. Throws std::runtime_error when singular.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M);

struct CareSolution {
    Eigen::MatrixXd P;
    Eigen::MatrixXd K;
    int iterations = 0;
    double residual = 0.0;
};

/**
 * Continuous algebraic Riccati equation by Newton-Kleinman iteration.
 *
 * The first gain comes from Bass' Lyapunov construction (zero if A is
 * already Hurwitz), so no pole placement is needed. Converged when the
 * Riccati residual, relative to max(1, |Q|), drops below tolerance.
 * Throws std::runtime_error if that does not happen within max_iterations.
 */
CareSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                        const Eigen::MatrixXd& R, double tolerance = 1e-9, int max_iterations = 100);

bool is_hurwitz(const Eigen::MatrixXd& A);

struct LqrEpisode {
    /// s_0 .. s_Ne, shorter when the episode diverged.
    std::vector<State> states;
    bool success = false;
    bool diverged = false;
};

/// One episode under the balance controller, re-evaluated every substep.
LqrEpisode lqr_rollout(const State& s0, const LqrGains& gains, const GoalSpec& g, const AcrobotParams& p);

/// Runs the balance controller for one episode from s0 and reports whether
/// the trajectory meets the success criterion. Divergence counts as failure.
bool basin_label(const State& s0, const LqrGains& gains, const GoalSpec& g, const AcrobotParams& p);

}  // namespace ssac

#endif  // SSAC_LQR_HPP
