// Copyright 2026 The Saltolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "salto/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace salto {

Vec2 forward_kinematics(const Vec2& q, const LegGeometry& geom) {
  const double q12 = q[0] + q[1];
  return Vec2(geom.l1 * std::sin(q[0]) + geom.l2 * std::sin(q12),
              -(geom.l1 * std::cos(q[0]) + geom.l2 * std::cos(q12)));
}

Vec2 clamp_to_reach(const Vec2& p_hip, const LegGeometry& geom, double eps_reach) {
  const double r = p_hip.norm();
  const double lo = geom.min_reach() + eps_reach;
  const double hi = geom.max_reach() - eps_reach;
  if (r >= lo && r <= hi) return p_hip;
  if (r < 1e-12) return Vec2(0.0, -lo);  // degenerate target at the hip
  return p_hip * (std::clamp(r, lo, hi) / r);
}

std::optional<Vec2> inverse_kinematics(const Vec2& p_hip, const LegGeometry& geom,
                                       double eps_reach) {
  const double r = p_hip.norm();
  if (r > geom.max_reach() || r < geom.min_reach()) return std::nullopt;

  const Vec2 p = clamp_to_reach(p_hip, geom, eps_reach);
  const double r2 = p.squaredNorm();

  // Law of cosines for the knee; acos range [0, pi] matches the q[1] >= 0
  // branch convention.
  const double c2 = std::clamp(
      (r2 - geom.l1 * geom.l1 - geom.l2 * geom.l2) / (2.0 * geom.l1 * geom.l2), -1.0, 1.0);
  const double q2 = std::acos(c2);

  const double a = geom.l1 + geom.l2 * std::cos(q2);
  const double b = geom.l2 * std::sin(q2);
  const double q1 = std::atan2(p.x(), -p.y()) - std::atan2(b, a);
  return Vec2(q1, q2);
}

Mat2 leg_jacobian(const Vec2& q, const LegGeometry& geom) {
  const double q12 = q[0] + q[1];
  const double c1 = geom.l1 * std::cos(q[0]), c12 = geom.l2 * std::cos(q12);
  const double s1 = geom.l1 * std::sin(q[0]), s12 = geom.l2 * std::sin(q12);
  Mat2 j;
  j << c1 + c12, c12,  // dx/dq
      s1 + s12, s12;   // dz/dq
  return j;
}

Vec2 world_foot_velocity(const Vec2& v_foot_body, const Vec2& p_foot_body,
                         const TrunkPose& pose, const TrunkVelocity& vel) {
  const Mat2 r = pose.rotation();
  const Vec2 p_rot = r * p_foot_body;
  return vel.linear + cross_z(vel.pitch_rate, p_rot) + r * v_foot_body;
}

}  // namespace salto
