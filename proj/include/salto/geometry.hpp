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

#include <optional>

#include "salto/types.hpp"

namespace salto {

// Two-link sagittal leg. Joint vector q = (hip, knee); the knee convention is
// q[1] >= 0 (knee bends backward), which fixes the IK branch.
struct LegGeometry {
  double l1 = 0.2;            // thigh length [m]
  double l2 = 0.2;            // shank length [m]
  double hip_offset_x = 0.0;  // hip x-position from trunk center, body frame [m]

  double max_reach() const { return l1 + l2; }
  double min_reach() const { return std::abs(l1 - l2); }
};

struct TrunkPose {
  Vec2 position = Vec2::Zero();  // world frame [m]
  double pitch = 0.0;            // [rad], positive nose-up

  Mat2 rotation() const {
    const double c = std::cos(pitch), s = std::sin(pitch);
    Mat2 r;
    r << c, -s, s, c;
    return r;
  }
};

struct TrunkVelocity {
  Vec2 linear = Vec2::Zero();  // world frame [m/s]
  double pitch_rate = 0.0;     // [rad/s]
};

struct FootState {
  Vec2 position_body = Vec2::Zero();   // relative to trunk center, body frame
  Vec2 position_world = Vec2::Zero();
  Vec2 velocity_body = Vec2::Zero();
};

// Foot position in the hip frame (axes parallel to the body frame).
// q = (0, 0) points the leg straight down.
Vec2 forward_kinematics(const Vec2& q, const LegGeometry& geom);

// Analytic IK, knee-backward branch (q[1] >= 0). Targets inside the physical
// annulus are solved with the radius clamped into
// [min_reach + eps_reach, max_reach - eps_reach]; targets outside it return
// nullopt so the caller can clamp.
std::optional<Vec2> inverse_kinematics(const Vec2& p_hip, const LegGeometry& geom,
                                       double eps_reach = 1e-6);

// Radially clamps a hip-frame target into the reachable annulus (minus the
// eps_reach margin), the clamping IK callers are expected to perform.
Vec2 clamp_to_reach(const Vec2& p_hip, const LegGeometry& geom, double eps_reach = 1e-6);

// d(foot position)/dq, closed form.
Mat2 leg_jacobian(const Vec2& q, const LegGeometry& geom);

inline Vec2 body_to_world(const Vec2& p_foot_body, const TrunkPose& pose) {
  return pose.position + pose.rotation() * p_foot_body;
}

// World-frame foot velocity from body-frame foot state and trunk motion.
Vec2 world_foot_velocity(const Vec2& v_foot_body, const Vec2& p_foot_body,
                         const TrunkPose& pose, const TrunkVelocity& vel);

}  // namespace salto
