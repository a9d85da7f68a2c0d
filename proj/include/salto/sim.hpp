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

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "salto/geometry.hpp"
#include "salto/terrain.hpp"
#include "salto/types.hpp"

namespace salto {

// Monotone piecewise-linear command -> output torque map, identity below the
// first knot, flat at the last knot's output, extended to negative commands by
// odd symmetry.
struct ActuatorKnot {
  double command = 0.0;  // [N*m]
  double output = 0.0;   // [N*m]
};

struct ActuatorCurve {
  std::vector<ActuatorKnot> knots;

  static ActuatorCurve default_curve();
  double limit() const { return knots.empty() ? 0.0 : knots.back().output; }
  void validate() const;  // throws std::invalid_argument on a malformed curve
};

double saturate_torque(double cmd, const ActuatorCurve& curve);

struct ContactParams {
  double k_normal = 1.0e4;  // [N/m]
  double d_normal = 100.0;  // [N*s/m]
  double mu = 0.6;
  double v_slip = 0.01;     // stiction regularization velocity [m/s]
};

struct RobotParams {
  double mass = 12.0;     // trunk [kg]
  double inertia = 0.1;   // trunk pitch inertia [kg*m^2]
  LegGeometry geom_front{0.2, 0.2, 0.19};
  LegGeometry geom_rear{0.2, 0.2, -0.19};
  double tau_limit = 23.0;       // [N*m]
  double body_length = 0.4;      // [m], termination geometry
  double body_height = 0.25;     // [m]
  double joint_reflected_inertia = 0.03;  // [kg*m^2]
  ActuatorCurve actuator = ActuatorCurve::default_curve();
  ContactParams contact;

  const LegGeometry& geometry(Leg leg) const {
    return leg == Leg::kFront ? geom_front : geom_rear;
  }
};

struct RobotState {
  TrunkPose pose;
  TrunkVelocity vel;
  Vec4 q = Vec4::Zero();   // (front hip, front knee, rear hip, rear knee) [rad]
  Vec4 qd = Vec4::Zero();  // [rad/s]
  std::array<bool, kNumLegs> foot_contact = {false, false};
  double time = 0.0;

  Vec2 leg_q(Leg leg) const { return q.segment<2>(2 * leg_index(leg)); }
  Vec2 leg_qd(Leg leg) const { return qd.segment<2>(2 * leg_index(leg)); }
};

struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// FK chain for one leg: body-frame position (hip offset included), world
// position, and body-frame velocity J*qd.
FootState foot_state(const RobotState& state, Leg leg, const RobotParams& params);

Vec2 foot_world_velocity(const RobotState& state, Leg leg, const RobotParams& params);

// Penalty normal force with tanh-regularized Coulomb friction; zero when the
// foot is above ground. Returned force is ground-on-robot, world frame.
Vec2 foot_contact_force(const Vec2& p_foot_world, const Vec2& v_foot_world,
                        const TerrainProfile& terrain, const ContactParams& params);

// One semi-implicit Euler substep. Commanded torques pass through the
// actuator curve; legs are massless, so the trunk feels gravity plus the foot
// contact forces, while each joint integrates the commanded torque plus the
// Jacobian-transpose load of its foot's contact force through the reflected
// inertia. In stance that load pins the joints to the terrain, so the joint
// motion follows the trunk; in swing it vanishes and the joints follow
// tau / J_r. Throws NonFiniteError if any state component leaves the reals.
RobotState step_physics(const RobotState& state, const Vec4& tau_cmd,
                        const TerrainProfile& terrain, const RobotParams& params, double dt);

enum class Termination { kTrunkContact, kPitchLimit, kPitFall, kNonFinite };

std::string to_string(Termination t);

std::optional<Termination> detect_termination(const RobotState& state,
                                              const TerrainProfile& terrain,
                                              const RobotParams& params);

}  // namespace salto
