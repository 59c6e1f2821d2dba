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

#ifndef SSAC_DYNAMICS_HPP
#define SSAC_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>

#include <Eigen/Dense>

namespace ssac {

using Rng = std::mt19937_64;

/**
 * @brief Acrobot configuration (theta1, theta2, dtheta1, dtheta2).
 *
 * theta1 is measured counter-clockwise from the positive horizontal axis and
 * theta2 is the elbow angle relative to the first link, so (pi/2, 0) is the
 * upright configuration. Angles are kept unwrapped during integration.
 */
struct State {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double dtheta1 = 0.0;
    double dtheta2 = 0.0;

    Eigen::Vector4d vec() const { return {theta1, theta2, dtheta1, dtheta2}; }
    static State from(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }
    bool finite() const;

    friend bool operator==(const State&, const State&) = default;
};

/// Mass and inertial parameters plus the integration clocks.
struct AcrobotParams {
    double m1 = 1.0;
    double m2 = 1.0;
    double l1 = 1.0;
    double l2 = 1.0;
    double lc1 = 0.5;
    double lc2 = 0.5;
    double I1 = 0.2;
    double I2 = 1.0;
    double gravity = 9.8;
    double dt_sim = 0.01;
    double dt_ctrl = 0.2;

    /// Number of Euler substeps per control interval. Throws unless dt_ctrl
    /// is an integer multiple of dt_sim.
    int substeps() const;
    void validate() const;
};

struct GoalSpec {
    State goal{std::numbers::pi / 2.0, 0.0, 0.0, 0.0};
    double eps_thr = 0.1;
    int lookback = 10;
    int episode_len = 50;

    void validate() const;
};

struct Accel {
    double ddtheta1 = 0.0;
    double ddtheta2 = 0.0;
};

/// Wraps an angle to [-pi, pi).
double wrap_angle(double x);

Eigen::Matrix2d mass_matrix(const State& s, const AcrobotParams& p);

/// Joint accelerations of D(q) qdd + C(q, qd) qd + G(q) = [0, tau].
/// Throws std::domain_error on non-finite input.
Accel accel(const State& s, double tau, const AcrobotParams& p);

/// Time derivative of the full state.
Eigen::Vector4d state_derivative(const State& s, double tau, const AcrobotParams& p);

/// Kinetic plus potential energy, potential measured from the pivot height.
double mechanical_energy(const State& s, const AcrobotParams& p);

inline constexpr double kDivergenceBound = 1e6;

struct StepResult {
    State state;
    /// Mean torque applied over the control interval.
    double torque = 0.0;
    bool diverged = false;
};

/// One control interval: tau is held for dt_ctrl / dt_sim explicit-Euler
/// substeps.
StepResult step(const State& s, double tau, const AcrobotParams& p);

using TorqueLaw = std::function<double(const State&)>;

/// One control interval with the torque re-evaluated at every substep. Used
/// for the balance controller, which is unstable under a 0.2 s hold.
StepResult step_feedback(const State& s, const TorqueLaw& law, const AcrobotParams& p);

/// Tip height, l1 sin(theta1) + l2 sin(theta1 + theta2).
double reward(const State& s, const AcrobotParams& p = {});

/// Euclidean distance to the goal with both angle differences wrapped.
double goal_error(const State& s, const GoalSpec& g);

/// True iff goal_error < eps_thr on each of the last lookback + 1 states.
/// Throws std::invalid_argument when the trajectory is shorter than that.
bool is_success(std::span<const State> trajectory, const GoalSpec& g);

/// Angles uniform on [-pi, pi), velocities uniform on [-1, 1].
State sample_initial_state(Rng& rng);

}  // namespace ssac

#endif  // SSAC_DYNAMICS_HPP
