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

#ifndef SSAC_OBSERVATION_HPP
#define SSAC_OBSERVATION_HPP

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "ssac/dynamics.hpp"

namespace ssac {

inline constexpr int kObservationSize = 6;
inline constexpr double kVelocityScale = 4.0 * std::numbers::pi;

using Observation = Eigen::Matrix<double, kObservationSize, 1>;

/// Network input encoding shared by every network:
/// (cos t1, sin t1, cos t2, sin t2, dt1 / 4pi, dt2 / 4pi).
inline Observation observe(const State& s) {
    Observation o;
    o << std::cos(s.theta1), std::sin(s.theta1), std::cos(s.theta2), std::sin(s.theta2),
         s.dtheta1 / kVelocityScale, s.dtheta2 / kVelocityScale;
    return o;
}

}  // namespace ssac

#endif  // SSAC_OBSERVATION_HPP
