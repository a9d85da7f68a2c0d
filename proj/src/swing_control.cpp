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

#include "salto/swing_control.hpp"

#include <algorithm>
#include <cmath>

#include "salto/gait.hpp"

namespace salto {
namespace {

// Smoothstep Hermite basis: h(0)=0, h(1)=1, h'(0)=h'(1)=0.
double hermite01(double s) { return s * s * (3.0 - 2.0 * s); }

}  // namespace

Vec2 raibert_foothold(const Vec2& hip_world, const Vec2& v_trunk, const Vec2& v_ref, double f,
                      const SwingConfig& config, const HeightQuery& terrain_height) {
  const double t_stance = stance_duration(f);
  const double x = hip_world.x() + 0.5 * t_stance * v_trunk.x() +
                   config.k_raibert * (v_trunk.x() - v_ref.x());
  return Vec2(x, terrain_height(x));
}

Vec2 swing_trajectory_point(const Vec2& p_liftoff, const SwingTarget& target, double s,
                            const SwingConfig& config) {
  s = std::clamp(s, 0.0, 1.0);
  const Vec2 p_target = target.target();
  const double x = p_liftoff.x() + (p_target.x() - p_liftoff.x()) * hermite01(s);

  const double apex = std::max(p_liftoff.y(), p_target.y()) + config.apex_height;
  double z;
  if (s < 0.5) {
    z = p_liftoff.y() + (apex - p_liftoff.y()) * hermite01(2.0 * s);
  } else {
    z = apex + (p_target.y() - apex) * hermite01(2.0 * s - 1.0);
  }
  return Vec2(x, z);
}

Vec2 swing_torques(const RobotState& state, Leg leg, const Vec2& p_desired_world,
                   const SwingConfig& config, const RobotParams& params) {
  const LegGeometry& geom = params.geometry(leg);

  // World target -> hip frame, clamped into reach so IK always solves.
  const Vec2 p_body =
      state.pose.rotation().transpose() * (p_desired_world - state.pose.position);
  const Vec2 p_hip = clamp_to_reach(p_body - Vec2(geom.hip_offset_x, 0.0), geom);

  const Vec2 q_des = inverse_kinematics(p_hip, geom).value();
  const Vec2 q = state.leg_q(leg);
  const Vec2 qd = state.leg_qd(leg);

  Vec2 tau = config.kp * (q_des - q) - config.kd * qd;
  tau[0] = saturate_torque(tau[0], params.actuator);
  tau[1] = saturate_torque(tau[1], params.actuator);
  return tau;
}

}  // namespace salto
