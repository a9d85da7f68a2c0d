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

#include <cmath>

#include "salto/rng.hpp"
#include "salto/sim.hpp"
#include "salto/stance_control.hpp"

namespace salto::testing {

inline RobotState equilibrium_stand(const RobotParams& params, double trunk_z = 0.3) {
  const double d_star = params.mass * kGravity / (2.0 * params.contact.k_normal);
  RobotState s;
  s.pose.position = Vec2(0.0, trunk_z);
  for (Leg leg : {Leg::kFront, Leg::kRear}) {
    s.q.segment<2>(2 * leg_index(leg)) =
        *inverse_kinematics(Vec2(0.0, -(trunk_z + d_star)), params.geometry(leg));
  }
  return s;
}

// Double-support pitch-rate tracking experiment: drives the stance controller
// with an omega reference square wave and reports the mean |omega error| over
// the window. Used by the feedback-benefit comparisons.
inline double omega_tracking_error(double k_d_fb, std::uint64_t seed, double amplitude = 2.0,
                                   double period = 0.4, double duration = 2.0) {
  const TerrainProfile flat = TerrainProfile::flat();
  const RobotParams params;
  StanceControlConfig config;
  config.feedback.k_d_fb = k_d_fb;

  RobotState s = equilibrium_stand(params);
  Rng rng(seed);
  for (int j = 0; j < 4; ++j) s.q[j] += rng.uniform(-0.02, 0.02);
  s.pose.position[1] += rng.uniform(-0.005, 0.005);

  const std::array<bool, kNumLegs> stance = {true, true};
  const double dt_tick = 0.002;
  const int ticks = static_cast<int>(duration / dt_tick);
  double error_sum = 0.0;
  int counted = 0;
  for (int tick = 0; tick < ticks; ++tick) {
    const double t = tick * dt_tick;
    const double omega_ref =
        amplitude * (std::fmod(t, period) < 0.5 * period ? 1.0 : -1.0);
    const auto cmd = stance_torques(s, stance, Vec3(0.0, 0.0, omega_ref), config, params);
    const Vec4 tau = cmd ? cmd->torques : Vec4::Zero();
    s = step_physics(s, tau, flat, params, 1e-3);
    s = step_physics(s, tau, flat, params, 1e-3);
    if (t > 0.2) {  // skip the initial settle
      error_sum += std::abs(s.vel.pitch_rate - omega_ref);
      ++counted;
    }
  }
  return error_sum / counted;
}

}  // namespace salto::testing
