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

// Reference implementations used only as test oracles. They are written
// independently of the library (scalar formulas, Cramer's rule, RK4).

#ifndef SSAC_TESTS_ORACLES_HPP
#define SSAC_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

struct Params {
    double m1 = 1.0, m2 = 1.0, l1 = 1.0, l2 = 1.0, lc1 = 0.5, lc2 = 0.5, I1 = 0.2, I2 = 1.0, g = 9.8;
};

using Vec4 = std::array<double, 4>;

/// Joint accelerations of the acrobot by Cramer's rule on the 2x2 system.
inline std::array<double, 2> accel(const Vec4& s, double tau, const Params& p = {}) {
    const double t1 = s[0], t2 = s[1], w1 = s[2], w2 = s[3];
    const double c2 = std::cos(t2);
    const double a = p.m1 * p.lc1 * p.lc1 + p.m2 * (p.l1 * p.l1 + p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2) + p.I1 + p.I2;
    const double b = p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) + p.I2;
    const double d = p.m2 * p.lc2 * p.lc2 + p.I2;
    const double h = p.m2 * p.l1 * p.lc2 * std::sin(t2);
    const double phi2 = p.m2 * p.lc2 * p.g * std::cos(t1 + t2);
    const double phi1 = (p.m1 * p.lc1 + p.m2 * p.l1) * p.g * std::cos(t1) + phi2;
    const double r1 = -(-h * w2 * w2 - 2.0 * h * w1 * w2) - phi1;
    const double r2 = tau - h * w1 * w1 - phi2;
    const double det = a * d - b * b;
    return {(r1 * d - b * r2) / det, (a * r2 - b * r1) / det};
}

inline Vec4 derivative(const Vec4& s, double tau, const Params& p = {}) {
    const auto dd = accel(s, tau, p);
    return {s[2], s[3], dd[0], dd[1]};
}

/// Classical fourth-order Runge-Kutta with constant torque.
inline Vec4 rk4(Vec4 s, double tau, double duration, double dt, const Params& p = {}) {
    const long n = std::lround(duration / dt);
    for (long i = 0; i < n; ++i) {
        const Vec4 k1 = derivative(s, tau, p);
        Vec4 x;
        for (int j = 0; j < 4; ++j) x[j] = s[j] + 0.5 * dt * k1[j];
        const Vec4 k2 = derivative(x, tau, p);
        for (int j = 0; j < 4; ++j) x[j] = s[j] + 0.5 * dt * k2[j];
        const Vec4 k3 = derivative(x, tau, p);
        for (int j = 0; j < 4; ++j) x[j] = s[j] + dt * k3[j];
        const Vec4 k4 = derivative(x, tau, p);
        for (int j = 0; j < 4; ++j) s[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return s;
}

inline double distance(const Vec4& a, const Vec4& b) {
    double ss = 0.0;
    for (int j = 0; j < 4; ++j) ss += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(ss);
}

/// Central finite-difference gradient of f at x.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + h;
        const double fp = f(x);
        x[i] = orig - h;
        const double fm = f(x);
        x[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// |a - b| / max(|a|, |b|) in the Euclidean norm; 0 when both vanish.
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    const double scale = std::sqrt(std::max(na, nb));
    return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

/// Routh-Hurwitz test on the characteristic polynomial of a 4x4 matrix,
/// with coefficients from the Faddeev-LeVerrier recursion.
inline bool hurwitz_4x4(const std::array<std::array<double, 4>, 4>& A) {
    using M = std::array<std::array<double, 4>, 4>;
    auto mul = [](const M& x, const M& y) {
        M z{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) z[i][j] += x[i][k] * y[k][j];
        return z;
    };
    auto trace = [](const M& x) { return x[0][0] + x[1][1] + x[2][2] + x[3][3]; };
    // det(sI - A) = s^4 + c[1] s^3 + c[2] s^2 + c[3] s + c[4]
    std::array<double, 5> c{1.0, 0.0, 0.0, 0.0, 0.0};
    M Mk{};  // M_0 = 0
    for (int k = 1; k <= 4; ++k) {
        M next = mul(A, Mk);
        for (int i = 0; i < 4; ++i) next[i][i] += c[k - 1];
        Mk = next;
        c[k] = -trace(mul(A, Mk)) / k;
    }
    const double a1 = c[1], a2 = c[2], a3 = c[3], a4 = c[4];
    return a1 > 0 && a2 > 0 && a3 > 0 && a4 > 0 && a1 * a2 - a3 > 0 && a3 * (a1 * a2 - a3) - a1 * a1 * a4 > 0;
}

}  // namespace oracle

#endif  // SSAC_TESTS_ORACLES_HPP
