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

#include "ssac/lqr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace ssac {

Eigen::Matrix4d LqrGains::default_state_cost() {
    Eigen::Matrix4d q;
    q << 1000, -500, 0, 0,
         -500, 1000, 0, 0,
         0, 0, 1000, -500,
         0, 0, -500, 1000;
    return q;
}

void LqrGains::validate() const {
    if (!K.allFinite()) throw std::invalid_argument("LQR gains must be finite");
    if (!(R > 0.0)) throw std::invalid_argument("LQR input cost must be positive");
    if (!Q.isApprox(Q.transpose())) throw std::invalid_argument("LQR state cost must be symmetric");
    if (Q.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() < -1e-9 * std::max(1.0, Q.norm())) {
        throw std::invalid_argument("LQR state cost must be positive semidefinite");
    }
    if (!(saturation > 0.0)) throw std::invalid_argument("LQR saturation must be positive");
}

Eigen::Vector4d wrapped_error(const State& s, const GoalSpec& g) {
    return {wrap_angle(s.theta1 - g.goal.theta1), wrap_angle(s.theta2 - g.goal.theta2),
            s.dtheta1 - g.goal.dtheta1, s.dtheta2 - g.goal.dtheta2};
}

double lqr_action(const State& s, const LqrGains& gains, const GoalSpec& g) {
    const double u = -gains.K.dot(wrapped_error(s, g));
    return std::clamp(u, -gains.saturation, gains.saturation);
}

Linearization linearize(const AcrobotParams& p, const GoalSpec& g) {
    const State& eq = g.goal;
    const Accel a0 = accel(eq, 0.0, p);
    if (eq.dtheta1 != 0.0 || eq.dtheta2 != 0.0 || std::abs(a0.ddtheta1) > 1e-12 || std::abs(a0.ddtheta2) > 1e-12) {
        throw std::invalid_argument("linearize: goal is not an equilibrium of the unforced dynamics");
    }
    // Velocity terms are quadratic and the bracket (tau e2 - G) vanishes at the
    // equilibrium, so only the gravity Jacobian and D^-1 survive.
    const double a = (p.m1 * p.lc1 + p.m2 * p.l1) * p.gravity;
    const double b = p.m2 * p.lc2 * p.gravity;
    const double s1 = std::sin(eq.theta1);
    const double s12 = std::sin(eq.theta1 + eq.theta2);
    Eigen::Matrix2d dG;
    dG << -a * s1 - b * s12, -b * s12,
          -b * s12, -b * s12;
    const Eigen::Matrix2d d_inv = mass_matrix(eq, p).inverse();

    Linearization lin;
    lin.A.setZero();
    lin.A.block<2, 2>(0, 2).setIdentity();
    lin.A.block<2, 2>(2, 0) = -d_inv * dG;
    lin.B.setZero();
    lin.B.segment<2>(2) = d_inv.col(1);
    return lin;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || M.rows() != n || M.cols() != n) throw std::invalid_argument("solve_lyapunov: shape mismatch");
    // vec(A^T X + X A) = (I kron A^T + A^T kron I) vec(X)
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            L.block(i * n, j * n, n, n) += I(i, j) * A.transpose();
            L.block(i * n, j * n, n, n) += A(j, i) * I;
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
    if (!lu.isInvertible()) throw std::runtime_error("solve_lyapunov: operator is singular");
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(Eigen::MatrixXd(M).data(), n * n);
    Eigen::VectorXd x = lu.solve(rhs);
    Eigen::MatrixXd X = Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
    return 0.5 * (X + X.transpose());
}

bool is_hurwitz(const Eigen::MatrixXd& A) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    return (es.eigenvalues().real().array() < 0.0).all();
}

CareSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                        const Eigen::MatrixXd& R, double tolerance, int max_iterations) {
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != m || R.cols() != m) {
        throw std::invalid_argument("solve_care: shape mismatch");
    }
    Eigen::LLT<Eigen::MatrixXd> r_llt(R);
    if (r_llt.info() != Eigen::Success) throw std::invalid_argument("solve_care: R must be positive definite");
    const Eigen::MatrixXd r_inv_bt = r_llt.solve(B.transpose());

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, n);
    if (!is_hurwitz(A)) {
        // Bass: with shift > spectral bound, K = B^T Z^-1 from
        // (A + shift I) Z + Z (A + shift I)^T = 2 B B^T stabilizes A - B K.
        const double shift = A.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
        const Eigen::MatrixXd As = A + shift * Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd Z = solve_lyapunov(As.transpose(), -2.0 * B * B.transpose());
        K = B.transpose() * Z.inverse();
        if (!is_hurwitz(A - B * K)) throw std::runtime_error("solve_care: (A, B) is not stabilizable");
    }

    const double scale = std::max(1.0, Q.norm());
    CareSolution sol;
    for (int it = 1; it <= max_iterations; ++it) {
        const Eigen::MatrixXd Ak = A - B * K;
        sol.P = solve_lyapunov(Ak, Q + K.transpose() * R * K);
        K = r_inv_bt * sol.P;
        const Eigen::MatrixXd res = A.transpose() * sol.P + sol.P * A - sol.P * B * r_inv_bt * sol.P + Q;
        sol.residual = res.norm() / scale;
        sol.iterations = it;
        if (sol.residual < tolerance) {
            sol.K = K;
            // Quadratic convergence: one more step usually reaches round-off.
            const Eigen::MatrixXd P = solve_lyapunov(A - B * K, Q + K.transpose() * R * K);
            const Eigen::MatrixXd res2 = A.transpose() * P + P * A - P * B * r_inv_bt * P + Q;
            if (res2.norm() / scale < sol.residual) {
                sol.P = P;
                sol.K = r_inv_bt * P;
                sol.residual = res2.norm() / scale;
            }
            return sol;
        }
    }
    throw std::runtime_error("solve_care: Newton-Kleinman did not converge");
}

LqrEpisode lqr_rollout(const State& s0, const LqrGains& gains, const GoalSpec& g, const AcrobotParams& p) {
    const TorqueLaw law = [&](const State& s) { return lqr_action(s, gains, g); };
    LqrEpisode ep;
    ep.states.reserve(static_cast<std::size_t>(g.episode_len) + 1);
    ep.states.push_back(s0);
    for (int t = 0; t < g.episode_len; ++t) {
        const StepResult r = step_feedback(ep.states.back(), law, p);
        if (r.diverged) {
            ep.diverged = true;
            return ep;
        }
        ep.states.push_back(r.state);
    }
    ep.success = is_success(std::span<const State>(ep.states).subspan(1), g);
    return ep;
}

bool basin_label(const State& s0, const LqrGains& gains, const GoalSpec& g, const AcrobotParams& p) {
    return lqr_rollout(s0, gains, g, p).success;
}

}  // namespace ssac
