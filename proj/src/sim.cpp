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

#include "salto/sim.hpp"

#include <cmath>
#include <sstream>

namespace salto {

ActuatorCurve ActuatorCurve::default_curve() {
  // Placeholder saturation knots; real hardware curves replace these through
  // the run config.
  return ActuatorCurve{{{15.0, 15.0}, {25.0, 20.0}, {31.0, 23.0}}};
}

void ActuatorCurve::validate() const {
  if (knots.empty()) throw std::invalid_argument("actuator curve needs at least one knot");
  double prev_cmd = 0.0, prev_out = 0.0;
  for (const ActuatorKnot& k : knots) {
    if (k.command <= prev_cmd && !(prev_cmd == 0.0 && k.command == 0.0)) {
      throw std::invalid_argument("actuator knot commands must increase");
    }
    if (k.output < prev_out) throw std::invalid_argument("actuator outputs must be monotone");
    if (k.output > k.command + 1e-12) {
      throw std::invalid_argument("actuator output may not exceed command");
    }
    prev_cmd = k.command;
    prev_out = k.output;
  }
}

double saturate_torque(double cmd, const ActuatorCurve& curve) {
  const double mag = std::abs(cmd);
  const double sign = cmd < 0.0 ? -1.0 : 1.0;
  double x0 = 0.0, y0 = 0.0;
  for (const ActuatorKnot& k : curve.knots) {
    if (mag <= k.command) {
      // Slope form keeps unity segments exact.
      const double slope = (k.output - y0) / (k.command - x0);
      return sign * (y0 + (mag - x0) * slope);
    }
    x0 = k.command;
    y0 = k.output;
  }
  return sign * y0;  // flat beyond the last knot
}

FootState foot_state(const RobotState& state, Leg leg, const RobotParams& params) {
  const LegGeometry& geom = params.geometry(leg);
  FootState fs;
  fs.position_body = forward_kinematics(state.leg_q(leg), geom) + Vec2(geom.hip_offset_x, 0.0);
  fs.position_world = body_to_world(fs.position_body, state.pose);
  fs.velocity_body = leg_jacobian(state.leg_q(leg), geom) * state.leg_qd(leg);
  return fs;
}

Vec2 foot_world_velocity(const RobotState& state, Leg leg, const RobotParams& params) {
  const FootState fs = foot_state(state, leg, params);
  return world_foot_velocity(fs.velocity_body, fs.position_body, state.pose, state.vel);
}

Vec2 foot_contact_force(const Vec2& p_foot_world, const Vec2& v_foot_world,
                        const TerrainProfile& terrain, const ContactParams& params) {
  const double penetration = height_at(terrain, p_foot_world.x()) - p_foot_world.y();
  if (penetration <= 0.0) return Vec2::Zero();
  const double f_z =
      std::max(0.0, params.k_normal * penetration - params.d_normal * v_foot_world.y());
  const double f_x = -params.mu * f_z * std::tanh(v_foot_world.x() / params.v_slip);
  return Vec2(f_x, f_z);
}

namespace {

bool all_finite(const RobotState& s) {
  return s.pose.position.allFinite() && std::isfinite(s.pose.pitch) &&
         s.vel.linear.allFinite() && std::isfinite(s.vel.pitch_rate) && s.q.allFinite() &&
         s.qd.allFinite();
}

std::string describe(const RobotState& s) {
  std::ostringstream os;
  os << "t=" << s.time << " p=(" << s.pose.position.x() << "," << s.pose.position.y()
     << ") theta=" << s.pose.pitch << " v=(" << s.vel.linear.x() << "," << s.vel.linear.y()
     << ") omega=" << s.vel.pitch_rate << " q=[" << s.q.transpose() << "] qd=["
     << s.qd.transpose() << "]";
  return os.str();
}

}  // namespace

namespace {

// Stability ceiling for the explicit stiction loop: the friction slope
// mu*f_z/v_slip reflected through the leg Jacobians into the joint inertia
// demands steps well below the external physics dt.
constexpr double kMaxInternalDt = 6.25e-5;

RobotState substep(const RobotState& state, const Vec4& tau, const TerrainProfile& terrain,
                   const RobotParams& params, double dt) {
  const Mat2 rot = state.pose.rotation();
  Vec2 force(0.0, -params.mass * kGravity);
  double moment = 0.0;
  Vec4 qdd = Vec4::Zero();
  std::array<bool, kNumLegs> contact{};

  for (Leg leg : {Leg::kFront, Leg::kRear}) {
    const int i = leg_index(leg);
    const LegGeometry& geom = params.geometry(leg);
    const Vec2 q = state.leg_q(leg);
    const Mat2 jac = leg_jacobian(q, geom);

    const Vec2 p_body = forward_kinematics(q, geom) + Vec2(geom.hip_offset_x, 0.0);
    const Vec2 p_rot = rot * p_body;
    const Vec2 p_world = state.pose.position + p_rot;
    const Vec2 v_world =
        state.vel.linear + cross_z(state.vel.pitch_rate, p_rot) + rot * (jac * state.leg_qd(leg));

    const Vec2 f_contact = foot_contact_force(p_world, v_world, terrain, params.contact);
    contact[i] = f_contact.y() > 0.0;
    force += f_contact;
    moment += cross2(p_rot, f_contact);

    // Contact load reflected into the joints; zero for airborne feet. In
    // stance this pins the foot to the ground so the joints follow the trunk.
    const Vec2 tau_leg = tau.segment<2>(2 * i) + jac.transpose() * (rot.transpose() * f_contact);
    qdd.segment<2>(2 * i) = tau_leg / params.joint_reflected_inertia;
  }

  RobotState next = state;
  next.vel.linear += dt * force / params.mass;
  next.vel.pitch_rate += dt * moment / params.inertia;
  next.qd += dt * qdd;
  next.pose.position += dt * next.vel.linear;
  next.pose.pitch = wrap_angle(state.pose.pitch + dt * next.vel.pitch_rate);
  next.q += dt * next.qd;
  next.foot_contact = contact;
  next.time = state.time + dt;
  return next;
}

}  // namespace

RobotState step_physics(const RobotState& state, const Vec4& tau_cmd,
                        const TerrainProfile& terrain, const RobotParams& params, double dt) {
  if (!(dt > 0.0) || dt > 0.002) {
    throw std::invalid_argument("physics dt must be in (0, 2ms]");
  }

  Vec4 tau;
  for (int j = 0; j < 4; ++j) tau[j] = saturate_torque(tau_cmd[j], params.actuator);

  const int n_internal = static_cast<int>(std::ceil(dt / kMaxInternalDt));
  const double dt_internal = dt / n_internal;
  RobotState next = state;
  for (int i = 0; i < n_internal; ++i) {
    next = substep(next, tau, terrain, params, dt_internal);
  }
  next.time = state.time + dt;  // avoid accumulating division remainders

  if (!all_finite(next)) {
    throw NonFiniteError("non-finite state after physics step: " + describe(next));
  }
  return next;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kTrunkContact: return "trunk_contact";
    case Termination::kPitchLimit: return "pitch_limit";
    case Termination::kPitFall: return "pit_fall";
    case Termination::kNonFinite: return "non_finite";
  }
  return "unknown";
}

std::optional<Termination> detect_termination(const RobotState& state,
                                              const TerrainProfile& terrain,
                                              const RobotParams& params) {
  if (!all_finite(state)) return Termination::kNonFinite;

  // A trunk deep below the local ground reads as a pit fall even though its
  // corners are also "in contact" down there.
  if (state.pose.position.y() < height_at(terrain, state.pose.position.x()) - 0.5) {
    return Termination::kPitFall;
  }
  if (std::abs(state.pose.pitch) > 1.5) return Termination::kPitchLimit;

  const Mat2 rot = state.pose.rotation();
  const double hx = 0.5 * params.body_length;
  const double hz = 0.5 * params.body_height;
  for (double sx : {-1.0, 1.0}) {
    for (double sz : {-1.0, 1.0}) {
      const Vec2 corner = state.pose.position + rot * Vec2(sx * hx, sz * hz);
      if (corner.y() < height_at(terrain, corner.x())) return Termination::kTrunkContact;
    }
  }
  return std::nullopt;
}

}  // namespace salto
