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

#include "ssac/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ssac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

struct SinCos {
    double sin;
    double cos;
};

// Reduces to the nearest multiple of pi/2 before evaluating, so angles that
// are exact multiples of pi/2 in floating point give exact 0/+-1. This keeps
// the upright and hanging configurations exact equilibria of the Euler map.
SinCos quadrant_sincos(double x) {
    const double k = std::nearbyint(x / kHalfPi);
    const double r = x - k * kHalfPi;
    const double sr = std::sin(r);
    const double cr = std::cos(r);
    long q = static_cast<long>(std::fmod(k, 4.0));
    if (q < 0) q += 4;
    switch (q) {
        case 0: return {sr, cr};
        case 1: return {cr, -sr};
        case 2: return {-sr, -cr};
        default: return {-cr, sr};
    }
}

Eigen::Matrix2d mass_matrix_from_cos2(double c2, const AcrobotParams& p) {
    const double d11 = p.m1 * p.lc1 * p.lc1
                     + p.m2 * (p.l1 * p.l1 + p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2)
                     + p.I1 + p.I2;
    const double d12 = p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) + p.I2;
    const double d22 = p.m2 * p.lc2 * p.lc2 + p.I2;
    Eigen::Matrix2d d;
    d << d11, d12,
         d12, d22;
    return d;
}

bool out_of_bounds(const State& s) {
    return !s.finite() || std::abs(s.theta1) > kDivergenceBound || std::abs(s.theta2) > kDivergenceBound
        || std::abs(s.dtheta1) > kDivergenceBound || std::abs(s.dtheta2) > kDivergenceBound;
}

State euler(const State& s, double tau, const AcrobotParams& p) {
    const Accel a = accel(s, tau, p);
    return {s.theta1 + p.dt_sim * s.dtheta1,
            s.theta2 + p.dt_sim * s.dtheta2,
            s.dtheta1 + p.dt_sim * a.ddtheta1,
            s.dtheta2 + p.dt_sim * a.ddtheta2};
}

}  // namespace

bool State::finite() const {
    return std::isfinite(theta1) && std::isfinite(theta2) && std::isfinite(dtheta1) && std::isfinite(dtheta2);
}

int AcrobotParams::substeps() const {
    if (!(dt_sim > 0.0) || !(dt_ctrl > 0.0)) {
        throw std::invalid_argument("dt_sim and dt_ctrl must be positive");
    }
    const double ratio = dt_ctrl / dt_sim;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        throw std::invalid_argument("dt_ctrl must be an integer multiple of dt_sim");
    }
    return static_cast<int>(rounded);
}

void AcrobotParams::validate() const {
    for (double v : {m1, m2, l1, l2, lc1, lc2, I1, I2}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("acrobot masses, lengths and inertias must be positive");
        }
    }
    if (!std::isfinite(gravity)) throw std::invalid_argument("gravity must be finite");
    (void)substeps();
}

void GoalSpec::validate() const {
    if (!goal.finite()) throw std::invalid_argument("goal state must be finite");
    if (!(eps_thr > 0.0)) throw std::invalid_argument("eps_thr must be positive");
    if (lookback < 0) throw std::invalid_argument("lookback must be non-negative");
    if (episode_len < lookback + 1) {
        throw std::invalid_argument("episode length must cover the success lookback window");
    }
}

double wrap_angle(double x) {
    double y = std::fmod(x + kPi, 2.0 * kPi);
    if (y < 0.0) y += 2.0 * kPi;
    y -= kPi;
    // fmod can land exactly on +pi after the shift back.
    return y >= kPi ? y - 2.0 * kPi : y;
}

Eigen::Matrix2d mass_matrix(const State& s, const AcrobotParams& p) {
    return mass_matrix_from_cos2(quadrant_sincos(s.theta2).cos, p);
}

Accel accel(const State& s, double tau, const AcrobotParams& p) {
    if (!s.finite() || !std::isfinite(tau)) {
        throw std::domain_error("accel: non-finite state or torque");
    }
    const SinCos q1 = quadrant_sincos(s.theta1);
    const SinCos q2 = quadrant_sincos(s.theta2);
    const SinCos q12 = quadrant_sincos(s.theta1 + s.theta2);

    const Eigen::Matrix2d d = mass_matrix_from_cos2(q2.cos, p);
    const double h = p.m2 * p.l1 * p.lc2 * q2.sin;
    const double c1 = -h * s.dtheta2 * s.dtheta2 - 2.0 * h * s.dtheta1 * s.dtheta2;
    const double c2 = h * s.dtheta1 * s.dtheta1;
    const double g2 = p.m2 * p.lc2 * p.gravity * q12.cos;
    const double g1 = (p.m1 * p.lc1 + p.m2 * p.l1) * p.gravity * q1.cos + g2;

    const double r1 = -c1 - g1;
    const double r2 = tau - c2 - g2;
    const double det = d(0, 0) * d(1, 1) - d(0, 1) * d(1, 0);
    return {(d(1, 1) * r1 - d(0, 1) * r2) / det, (d(0, 0) * r2 - d(1, 0) * r1) / det};
}

Eigen::Vector4d state_derivative(const State& s, double tau, const AcrobotParams& p) {
    const Accel a = accel(s, tau, p);
    return {s.dtheta1, s.dtheta2, a.ddtheta1, a.ddtheta2};
}

double mechanical_energy(const State& s, const AcrobotParams& p) {
    const Eigen::Vector2d qd(s.dtheta1, s.dtheta2);
    const double kinetic = 0.5 * qd.dot(mass_matrix(s, p) * qd);
    const double potential = (p.m1 * p.lc1 + p.m2 * p.l1) * p.gravity * std::sin(s.theta1)
                           + p.m2 * p.lc2 * p.gravity * std::sin(s.theta1 + s.theta2);
    return kinetic + potential;
}

StepResult step(const State& s, double tau, const AcrobotParams& p) {
    const int n = p.substeps();
    StepResult out{s, tau, false};
    for (int i = 0; i < n; ++i) {
        out.state = euler(out.state, tau, p);
        if (out_of_bounds(out.state)) {
            out.diverged = true;
            return out;
        }
    }
    return out;
}

StepResult step_feedback(const State& s, const TorqueLaw& law, const AcrobotParams& p) {
    const int n = p.substeps();
    StepResult out{s, 0.0, false};
    double torque_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double tau = law(out.state);
        torque_sum += tau;
        out.state = euler(out.state, tau, p);
        if (out_of_bounds(out.state)) {
            out.torque = torque_sum / (i + 1);
            out.diverged = true;
            return out;
        }
    }
    out.torque = torque_sum / n;
    return out;
}

double reward(const State& s, const AcrobotParams& p) {
    return p.l1 * quadrant_sincos(s.theta1).sin + p.l2 * quadrant_sincos(s.theta1 + s.theta2).sin;
}

double goal_error(const State& s, const GoalSpec& g) {
    const double e1 = wrap_angle(s.theta1 - g.goal.theta1);
    const double e2 = wrap_angle(s.theta2 - g.goal.theta2);
    const double e3 = s.dtheta1 - g.goal.dtheta1;
    const double e4 = s.dtheta2 - g.goal.dtheta2;
    return std::sqrt(e1 * e1 + e2 * e2 + e3 * e3 + e4 * e4);
}

bool is_success(std::span<const State> trajectory, const GoalSpec& g) {
    const auto window = static_cast<std::size_t>(g.lookback) + 1;
    if (trajectory.size() < window) {
        throw std::invalid_argument("is_success: trajectory has " + std::to_string(trajectory.size())
                                    + " states, need at least " + std::to_string(window));
    }
    for (std::size_t i = trajectory.size() - window; i < trajectory.size(); ++i) {
        if (!(goal_error(trajectory[i], g) < g.eps_thr)) return false;
    }
    return true;
}

State sample_initial_state(Rng& rng) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> velocity(-1.0, 1.0);
    State s;
    s.theta1 = angle(rng);
    s.theta2 = angle(rng);
    s.dtheta1 = velocity(rng);
    s.dtheta2 = velocity(rng);
    return s;
}

}  // namespace ssac
