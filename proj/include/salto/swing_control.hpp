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

#pragma once

#include <functional>

#include "salto/sim.hpp"
#include "salto/types.hpp"

namespace salto {

struct SwingConfig {
  double apex_height = 0.10;   // clearance above max(liftoff, target) [m]
  double kp = 30.0;            // joint PD gains
  double kd = 1.0;
  double k_raibert = 0.03;     // velocity-error foothold gain [s]
  // Static touchdown trim toward the trunk center, applied by the
  // environment on top of the nominal foothold. Keeps the hip torque for
  // cone-edge tangential forces clear of actuator saturation; a trained
  // policy supplies the same correction through its residuals.
  double foothold_inset = 0.0;
};

// Touchdown target: nominal foothold plus the policy's world-frame residual.
struct SwingTarget {
  Vec2 nominal = Vec2::Zero();
  Vec2 residual = Vec2::Zero();

  Vec2 target() const { return nominal + residual; }
};

using HeightQuery = std::function<double(double)>;

// Foothold heuristic: half a stance period of travel ahead of the hip plus a
// velocity-error correction; the landing height comes from `terrain_height`
// (the observed heightmap during rollouts, ground truth in tests).
Vec2 raibert_foothold(const Vec2& hip_world, const Vec2& v_trunk, const Vec2& v_ref, double f,
                      const SwingConfig& config, const HeightQuery& terrain_height);

// Desired world-frame foot position at swing progress s in [0, 1]: cubic
// Hermite in x with zero endpoint velocities, piecewise-cubic in z through an
// apex above max(liftoff, target) at s = 0.5.
Vec2 swing_trajectory_point(const Vec2& p_liftoff, const SwingTarget& target, double s,
                            const SwingConfig& config);

// IK + joint PD toward the desired world foot position; the target is clamped
// into the reachable annulus, and the resulting torques pass through the
// actuator saturation model.
Vec2 swing_torques(const RobotState& state, Leg leg, const Vec2& p_desired_world,
                   const SwingConfig& config, const RobotParams& params);

}  // namespace salto
