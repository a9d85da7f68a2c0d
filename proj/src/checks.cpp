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

#include "salto/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "salto/config.hpp"
#include "salto/env.hpp"
#include "salto/gait.hpp"
#include "salto/perception.hpp"
#include "salto/reference_solvers.hpp"
#include "salto/rollout.hpp"
#include "salto/sim.hpp"
#include "salto/stance_control.hpp"
#include "salto/swing_control.hpp"
#include "salto/terrain.hpp"

namespace salto {
namespace {

struct Ctx {
  std::string detail;
  bool pass = true;

  void require(bool ok, const std::string& message) {
    if (!ok && pass) {
      pass = false;
      detail = message;
    }
  }
  template <typename T>
  void note(const std::string& key, T value) {
    std::ostringstream os;
    os << key << "=" << value;
    detail = detail.empty() ? os.str() : detail + " " + os.str();
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Field-by-field bitwise equality; the struct has padding, so memcmp is out.
bool tick_equal(const TickRecord& a, const TickRecord& b) {
  return a.t == b.t && a.x == b.x && a.z == b.z && a.theta == b.theta && a.vx == b.vx &&
         a.vz == b.vz && a.omega == b.omega && a.phi == b.phi &&
         a.contact_front == b.contact_front && a.contact_rear == b.contact_rear &&
         a.tau == b.tau && a.qp_cost == b.qp_cost && a.v_ref == b.v_ref &&
         a.reward_total == b.reward_total;
}

GrfProblem random_grf_problem(Rng& rng, int contacts) {
  GrfProblem p;
  p.mass = 12.0;
  p.inertia = 0.1;
  p.mu = rng.uniform(0.3, 1.0);
  p.f_z_max = 250.0;
  p.accel_ref = Vec3(rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(-60, 60));
  for (int j = 0; j < contacts; ++j) {
    p.foot_offsets.push_back(Vec2(rng.uniform(-0.35, 0.35), rng.uniform(-0.4, -0.15)));
  }
  return p;
}

// ---------------------------------------------------------------------------
// geometry

bool check_ik_fk_roundtrip(Ctx& ctx) {
  Rng rng(101);
  const LegGeometry geom{0.2, 0.2, 0.0};
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 q(rng.uniform(-kPi, kPi), rng.uniform(0.01, kPi - 0.01));
    const Vec2 p = forward_kinematics(q, geom);
    const auto back = inverse_kinematics(p, geom);
    if (!back) {
      ctx.require(false, "IK failed on reachable target");
      return ctx.pass;
    }
    worst = std::max(worst, (wrap_angle(q[0] - (*back)[0]) * Vec2::UnitX() +
                             wrap_angle(q[1] - (*back)[1]) * Vec2::UnitY())
                                .lpNorm<Eigen::Infinity>());
  }
  ctx.note("max_joint_err", worst);
  ctx.require(worst < 1e-9, "roundtrip error " + fmt(worst));
  return ctx.pass;
}

bool check_jacobian_fd(Ctx& ctx) {
  Rng rng(102);
  const LegGeometry geom{0.2, 0.2, 0.0};
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 q(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    const Mat2 jac = leg_jacobian(q, geom);
    Mat2 fd;
    for (int col = 0; col < 2; ++col) {
      Vec2 qp = q, qm = q;
      qp[col] += h;
      qm[col] -= h;
      fd.col(col) = (forward_kinematics(qp, geom) - forward_kinematics(qm, geom)) / (2.0 * h);
    }
    worst = std::max(worst, (jac - fd).norm() / std::max(1e-12, jac.norm()));
  }
  ctx.note("max_rel_err", worst);
  ctx.require(worst < 1e-5, "jacobian fd error " + fmt(worst));
  return ctx.pass;
}

bool check_transform_velocity(Ctx& ctx) {
  // Smooth analytic trajectory; the numeric derivative of the transformed
  // position must match the velocity composition.
  const double dt = 1e-5;
  double worst = 0.0;
  for (double t : {0.1, 0.7, 1.3, 2.9}) {
    const auto pose_at = [](double s) {
      TrunkPose pose;
      pose.position = Vec2(0.5 * s + 0.1 * std::sin(s), 0.3 + 0.05 * std::cos(2.0 * s));
      pose.pitch = 0.3 * std::sin(1.7 * s);
      return pose;
    };
    const auto foot_at = [](double s) {
      return Vec2(0.15 * std::cos(s), -0.25 + 0.04 * std::sin(3.0 * s));
    };
    const TrunkPose pose = pose_at(t);
    TrunkVelocity vel;
    vel.linear = (pose_at(t + dt).position - pose_at(t - dt).position) / (2.0 * dt);
    vel.pitch_rate = (pose_at(t + dt).pitch - pose_at(t - dt).pitch) / (2.0 * dt);
    const Vec2 v_foot_body = (foot_at(t + dt) - foot_at(t - dt)) / (2.0 * dt);

    const Vec2 numeric = (body_to_world(foot_at(t + dt), pose_at(t + dt)) -
                          body_to_world(foot_at(t - dt), pose_at(t - dt))) /
                         (2.0 * dt);
    const Vec2 analytic = world_foot_velocity(v_foot_body, foot_at(t), pose, vel);
    worst = std::max(worst, (numeric - analytic).norm() / std::max(1.0, analytic.norm()));
  }
  ctx.note("max_rel_err", worst);
  ctx.require(worst < 1e-3, "velocity composition error " + fmt(worst));
  return ctx.pass;
}

bool check_rotation_orthonormal(Ctx& ctx) {
  Rng rng(103);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    TrunkPose pose;
    pose.pitch = rng.uniform(-10.0, 10.0);
    const Mat2 r = pose.rotation();
    worst = std::max(worst, (r * r.transpose() - Mat2::Identity()).norm());
    worst = std::max(worst, std::abs(r.determinant() - 1.0));
  }
  ctx.note("max_defect", worst);
  ctx.require(worst < 1e-12, "rotation defect " + fmt(worst));
  return ctx.pass;
}

// ---------------------------------------------------------------------------
// terrain

bool check_terrain_deterministic(Ctx& ctx) {
  for (TerrainKind kind : {TerrainKind::kSingleGap, TerrainKind::kSingleStep,
                           TerrainKind::kStairs, TerrainKind::kSteppingStones}) {
    for (int level : {0, 5, kMaxTerrainLevel}) {
      for (std::uint64_t seed : {1ull, 7ull}) {
        const TerrainProfile a = generate_terrain({kind, level, seed});
        const TerrainProfile b = generate_terrain({kind, level, seed});
        bool equal = a.extent == b.extent && a.breakpoints.size() == b.breakpoints.size();
        for (std::size_t i = 0; equal && i < a.breakpoints.size(); ++i) {
          equal = std::memcmp(&a.breakpoints[i], &b.breakpoints[i], sizeof(Breakpoint)) == 0;
        }
        ctx.require(equal, "profiles differ for " + to_string(kind));
      }
    }
  }
  return ctx.pass;
}

bool check_flat_heightmap_zero(Ctx& ctx) {
  const TerrainProfile flat = TerrainProfile::flat();
  HeightmapConfig cfg;
  for (double base : {-3.0, 0.0, 1.23, 57.0}) {
    const Heightmap hm = sample_heightmap(flat, base, cfg);
    for (double v : hm.values) ctx.require(v == 0.0, "flat sample nonzero at base " + fmt(base));
  }
  return ctx.pass;
}

bool check_randomize_metadata(Ctx& ctx) {
  Rng rng(104);
  HeightmapConfig cfg;
  const Heightmap hm = sample_heightmap(generate_terrain({TerrainKind::kStairs, 4, 3}), 0.7, cfg);
  for (int i = 0; i < 50; ++i) {
    const Heightmap out = randomize_heightmap(hm, cfg, rng);
    ctx.require(out.values.size() == hm.values.size(), "length changed");
    ctx.require(out.origin_x == hm.origin_x && out.cell_size == hm.cell_size,
                "metadata changed");
  }
  return ctx.pass;
}

bool check_difficulty_monotone(Ctx& ctx) {
  // Measured feature sizes must grow (or shrink toward harder) with level.
  auto gap_width = [](const TerrainProfile& p) {
    for (std::size_t i = 0; i + 1 < p.breakpoints.size(); ++i) {
      if (p.breakpoints[i].height < -0.5) return p.breakpoints[i + 1].x - p.breakpoints[i].x;
    }
    return 0.0;
  };
  double prev_gap = 0.0, prev_step = 0.0, prev_rise = 0.0, prev_stone_gap = 0.0;
  double prev_stone = 1e9;
  for (int level = 0; level <= kMaxTerrainLevel; ++level) {
    const double gap = gap_width(generate_terrain({TerrainKind::kSingleGap, level, 5}));
    ctx.require(gap >= prev_gap, "gap width not monotone");
    prev_gap = gap;

    const TerrainProfile step = generate_terrain({TerrainKind::kSingleStep, level, 5});
    const double sh = step.breakpoints.back().height;
    ctx.require(sh >= prev_step, "step height not monotone");
    prev_step = sh;

    const TerrainProfile stairs = generate_terrain({TerrainKind::kStairs, level, 5});
    const double rise = stairs.breakpoints[1].height;
    ctx.require(rise >= prev_rise, "stair rise not monotone");
    prev_rise = rise;

    const TerrainProfile stones = generate_terrain({TerrainKind::kSteppingStones, level, 5});
    double stone_gap = 0.0, stone_len = 1e9;
    for (std::size_t i = 0; i + 1 < stones.breakpoints.size(); ++i) {
      const double width = stones.breakpoints[i + 1].x - stones.breakpoints[i].x;
      if (stones.breakpoints[i].height < -0.5) {
        stone_gap = width;
      } else if (i > 0) {
        stone_len = std::min(stone_len, width);
      }
    }
    ctx.require(stone_gap >= prev_stone_gap, "stone gap not monotone");
    ctx.require(stone_len <= prev_stone, "stone length not monotone");
    prev_stone_gap = stone_gap;
    prev_stone = stone_len;
  }
  return ctx.pass;
}

// ---------------------------------------------------------------------------
// gait

bool check_mode_sequence(Ctx& ctx) {
  const GaitConfig cfg;
  GaitState state;
  const double dt = 1e-4;
  const double f = 2.0;
  std::vector<int> modes;
  const auto mode_of = [&](const GaitState& s) {
    const ContactSchedule c = scheduled_contacts(s, cfg);
    if (c.front) return 0;
    if (c.rear) return 2;
    return s.phase < cfg.boundaries[1] ? 1 : 3;
  };
  modes.push_back(mode_of(state));
  const int steps = static_cast<int>(std::lround(1.0 / (f * dt)));
  for (int i = 0; i < steps; ++i) {
    state = advance_phase(state, f, dt, cfg);
    if (mode_of(state) != modes.back()) modes.push_back(mode_of(state));
  }
  // One full cycle: front, flight, rear, flight, then wrap back to front.
  ctx.require(modes.size() == 5, "saw " + std::to_string(modes.size()) + " mode changes");
  if (modes.size() == 5) {
    const std::vector<int> expect = {0, 1, 2, 3, 0};
    ctx.require(modes == expect, "mode order wrong");
  }
  return ctx.pass;
}

bool check_phase_monotone(Ctx& ctx) {
  const GaitConfig cfg;
  GaitState state;
  double unwrapped = 0.0, prev_phase = 0.0;
  Rng rng(105);
  for (int i = 0; i < 5000; ++i) {
    const double f = rng.uniform(0.5, 3.5);
    const GaitState next = advance_phase(state, f, 0.002, cfg);
    double delta = next.phase - prev_phase;
    if (delta < 0.0) delta += kTwoPi;
    ctx.require(delta > 0.0, "phase failed to advance");
    unwrapped += delta;
    prev_phase = next.phase;
    state = next;
  }
  ctx.note("unwrapped", unwrapped);
  return ctx.pass;
}

bool check_no_double_stance(Ctx& ctx) {
  const GaitConfig cfg;
  for (int i = 0; i < 20000; ++i) {
    GaitState s;
    s.phase = kTwoPi * i / 20000.0;
    const ContactSchedule c = scheduled_contacts(s, cfg);
    ctx.require(!(c.front && c.rear), "double stance at phase " + fmt(s.phase));
  }
  return ctx.pass;
}

bool check_swing_progress_monotone(Ctx& ctx) {
  const GaitConfig cfg;
  for (Leg leg : {Leg::kFront, Leg::kRear}) {
    double prev = -1.0;
    bool in_window = false;
    for (int i = 0; i <= 200000; ++i) {
      GaitState s;
      // Sweep one cycle starting from the leg's stance so the window is
      // contiguous in the sweep.
      const double start = leg == Leg::kFront ? 0.0 : cfg.boundaries[1];
      s.phase = wrap_phase(start + kTwoPi * i / 200001.0);
      const auto p = swing_progress(s, leg, cfg);
      if (!p) {
        in_window = false;
        continue;
      }
      if (in_window) {
        ctx.require(*p >= prev - 1e-12, "swing progress decreased");
        ctx.require(*p - prev < 1e-4, "swing progress jumped");
      }
      prev = *p;
      in_window = true;
    }
  }
  return ctx.pass;
}

// ---------------------------------------------------------------------------
// sim

bool check_flight_ballistics(Ctx& ctx) {
  const TerrainProfile flat = TerrainProfile::flat();
  const RobotParams params;
  RobotState state;
  state.pose.position = Vec2(0.0, 1.2);
  state.vel.linear = Vec2(0.8, 0.5);
  state.vel.pitch_rate = 0.3;
  for (Leg leg : {Leg::kFront, Leg::kRear}) {
    state.q.segment<2>(2 * leg_index(leg)) =
        *inverse_kinematics(Vec2(0.0, -0.25), params.geometry(leg));
  }
  const double dt = 1e-3;
  std::vector<double> zs;
  std::vector<double> omegas;
  for (int i = 0; i < 120; ++i) {
    state = step_physics(state, Vec4::Zero(), flat, params, dt);
    if (state.foot_contact[0] || state.foot_contact[1]) break;
    zs.push_back(state.pose.position.y());
    omegas.push_back(state.vel.pitch_rate);
  }
  ctx.require(zs.size() >= 10, "no airborne segment");
  double worst_accel = 0.0;
  for (std::size_t i = 1; i + 1 < zs.size(); ++i) {
    const double accel = (zs[i + 1] - 2.0 * zs[i] + zs[i - 1]) / (dt * dt);
    worst_accel = std::max(worst_accel, std::abs(accel + kGravity));
  }
  double worst_domega = 0.0;
  for (std::size_t i = 1; i < omegas.size(); ++i) {
    worst_domega = std::max(worst_domega, std::abs(omegas[i] - omegas[i - 1]));
  }
  ctx.note("accel_defect", worst_accel);
  ctx.note("domega", worst_domega);
  ctx.require(worst_accel < 0.01, "vertical accel off gravity by " + fmt(worst_accel));
  ctx.require(worst_domega < 1e-6, "pitch rate drifted in flight");
  return ctx.pass;
}

bool check_contact_unilateral(Ctx& ctx) {
  Rng rng(106);
  const TerrainProfile terrain = generate_terrain({TerrainKind::kStairs, 6, 2});
  const ContactParams params;
  for (int i = 0; i < 5000; ++i) {
    const Vec2 p(rng.uniform(-1.0, 5.0), rng.uniform(-1.2, 2.5));
    const Vec2 v(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    const Vec2 f = foot_contact_force(p, v, terrain, params);
    ctx.require(f.y() >= 0.0, "negative normal force");
    if (f.y() == 0.0) ctx.require(f.x() == 0.0, "tangential force without normal force");
    if (f.y() > 0.0) ctx.require(std::abs(f.x()) <= params.mu * f.y() + 1e-9, "friction over cone");
  }
  return ctx.pass;
}

bool check_saturation_properties(Ctx& ctx) {
  const ActuatorCurve curve = ActuatorCurve::default_curve();
  Rng rng(107);
  for (int i = 0; i < 5000; ++i) {
    const double a = rng.uniform(-60.0, 60.0);
    const double b = rng.uniform(-60.0, 60.0);
    const double sa = saturate_torque(a, curve);
    const double sb = saturate_torque(b, curve);
    ctx.require(std::abs(saturate_torque(-a, curve) + sa) < 1e-12, "not odd");
    if (a <= b) ctx.require(sa <= sb + 1e-12, "not monotone");
    ctx.require(std::abs(sa - sb) <= std::abs(a - b) + 1e-12, "not 1-Lipschitz");
    if (std::abs(a) <= curve.knots.front().command) {
      ctx.require(sa == a, "not identity below first knot");
    }
    ctx.require(std::abs(sa) <= curve.limit() + 1e-12, "exceeds limit");
  }
  return ctx.pass;
}

bool check_sim_determinism(Ctx& ctx) {
  const TerrainProfile terrain = generate_terrain({TerrainKind::kSingleStep, 3, 9});
  const RobotParams params;
  Rng rng(108);
  const auto run = [&](RobotState s) {
    Rng torque_rng(77);
    for (int i = 0; i < 400; ++i) {
      Vec4 tau;
      for (int j = 0; j < 4; ++j) tau[j] = torque_rng.uniform(-10.0, 10.0);
      s = step_physics(s, tau, terrain, params, 1e-3);
    }
    return s;
  };
  RobotState init;
  init.pose.position = Vec2(0.0, 0.32);
  for (Leg leg : {Leg::kFront, Leg::kRear}) {
    init.q.segment<2>(2 * leg_index(leg)) =
        *inverse_kinematics(Vec2(0.0, -0.3), params.geometry(leg));
  }
  const RobotState a = run(init);
  const RobotState b = run(init);
  ctx.require(a.pose.position == b.pose.position && a.pose.pitch == b.pose.pitch &&
                  a.q == b.q && a.qd == b.qd && a.vel.linear == b.vel.linear &&
                  a.vel.pitch_rate == b.vel.pitch_rate,
              "trajectories diverged");
  return ctx.pass;
}

// ---------------------------------------------------------------------------
// stance control

bool check_qp_kkt(Ctx& ctx) {
  Rng rng(109);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const GrfProblem p = random_grf_problem(rng, 1 + (i % 2));
    const auto detail = solve_grf_qp_detailed(p, QpMode::kExact);
    if (!detail) {
      ctx.require(false, "solver failed on instance " + std::to_string(i));
      return ctx.pass;
    }
    worst = std::max(worst, detail->kkt_residual);
  }
  ctx.note("max_kkt", worst);
  ctx.require(worst < 1e-8, "KKT residual " + fmt(worst));
  return ctx.pass;
}

bool check_qp_oracle(Ctx& ctx) {
  Rng rng(109);  // same instances as the KKT check
  double worst = -1e9;
  for (int i = 0; i < 200; ++i) {
    const GrfProblem p = random_grf_problem(rng, 1 + (i % 2));
    const auto sol = solve_grf_qp(p, QpMode::kExact);
    const PgdResult ref = solve_grf_projected_gradient(p, 1e-10);
    worst = std::max(worst, sol->cost - ref.objective);
  }
  ctx.note("max_excess_over_oracle", worst);
  ctx.require(worst <= 1e-6, "objective above oracle by " + fmt(worst));
  return ctx.pass;
}

bool check_qp_permutation(Ctx& ctx) {
  Rng rng(110);
  for (int i = 0; i < 50; ++i) {
    GrfProblem p = random_grf_problem(rng, 2);
    GrfProblem swapped = p;
    std::swap(swapped.foot_offsets[0], swapped.foot_offsets[1]);
    const auto a = solve_grf_qp(p, QpMode::kExact);
    const auto b = solve_grf_qp(swapped, QpMode::kExact);
    ctx.require((a->forces[0] - b->forces[1]).norm() < 1e-8 &&
                    (a->forces[1] - b->forces[0]).norm() < 1e-8,
                "solution not permutation-equivariant");
  }
  return ctx.pass;
}

bool check_qp_cone_feasibility(Ctx& ctx) {
  Rng rng(111);
  for (int i = 0; i < 200; ++i) {
    const GrfProblem p = random_grf_problem(rng, 1 + (i % 2));
    for (QpMode mode : {QpMode::kExact, QpMode::kApprox}) {
      const auto sol = solve_grf_qp(p, mode);
      for (const Vec2& f : sol->forces) {
        ctx.require(f.y() >= -1e-8 && f.y() <= p.f_z_max + 1e-8, "f_z outside box");
        ctx.require(std::abs(f.x()) <= p.mu * f.y() + 1e-8, "force outside cone");
      }
    }
  }
  return ctx.pass;
}

bool check_qp_cost_monotone(Ctx& ctx) {
  // The optimal value is zero at the free-fall acceleration (f = 0) and
  // convex in a_ref, so scaling the demanded deviation from free fall never
  // decreases the optimal cost.
  Rng rng(112);
  const Vec3 free_fall(0.0, -kGravity, 0.0);
  for (int i = 0; i < 40; ++i) {
    GrfProblem p = random_grf_problem(rng, 1 + (i % 2));
    const Vec3 err(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-40, 40));
    double prev = -1.0;
    for (double scale : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
      p.accel_ref = free_fall + scale * err;
      const double cost = solve_grf_qp(p, QpMode::kExact)->cost;
      ctx.require(cost >= prev - 1e-9, "cost decreased with larger error");
      prev = cost;
    }
  }
  return ctx.pass;
}

bool check_eq4_identity_production(Ctx& ctx) {
  std::string detail;
  const bool ok = check_foot_velocity_inverse_identity(
      [](const Vec2& v_ref, double omega_ref, const Vec2& p_foot_body, const TrunkPose& pose) {
        return reference_foot_velocity(v_ref, omega_ref, p_foot_body, pose);
      },
      1000, &detail);
  ctx.detail = detail;
  ctx.require(ok, detail);
  return ctx.pass;
}

// ---------------------------------------------------------------------------
// swing control

bool check_trajectory_endpoints(Ctx& ctx) {
  Rng rng(113);
  SwingConfig cfg;
  for (int i = 0; i < 200; ++i) {
    const Vec2 liftoff(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5));
    SwingTarget target;
    target.nominal = Vec2(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5));
    target.residual = Vec2(rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15));
    ctx.require((swing_trajectory_point(liftoff, target, 0.0, cfg) - liftoff).norm() == 0.0,
                "start endpoint missed");
    ctx.require((swing_trajectory_point(liftoff, target, 1.0, cfg) - target.target()).norm() <
                    1e-12,
                "end endpoint missed");
    const Vec2 apex = swing_trajectory_point(liftoff, target, 0.5, cfg);
    ctx.require(std::abs(apex.y() - (std::max(liftoff.y(), target.target().y()) +
                                     cfg.apex_height)) < 1e-12,
                "apex height missed");
    Vec2 prev = liftoff;
    for (int k = 1; k <= 500; ++k) {
      const Vec2 p = swing_trajectory_point(liftoff, target, k / 500.0, cfg);
      ctx.require((p - prev).norm() < 0.05, "trajectory discontinuity");
      prev = p;
    }
  }
  return ctx.pass;
}

bool check_raibert_equivariance(Ctx& ctx) {
  Rng rng(114);
  SwingConfig cfg;
  const TerrainProfile terrain = generate_terrain({TerrainKind::kStairs, 5, 4});
  for (int i = 0; i < 200; ++i) {
    const Vec2 hip(rng.uniform(0, 3), rng.uniform(0.2, 0.6));
    const Vec2 v(rng.uniform(-1, 2), rng.uniform(-1, 1));
    const Vec2 v_ref(rng.uniform(-1, 2), 0.0);
    const double f = rng.uniform(0.5, 3.5);
    const double dx = rng.uniform(-2, 2);
    const Vec2 a = raibert_foothold(hip, v, v_ref, f, cfg,
                                    [&](double x) { return height_at(terrain, x); });
    const Vec2 b =
        raibert_foothold(hip + Vec2(dx, 0), v, v_ref, f, cfg,
                         [&](double x) { return height_at(terrain, x - dx); });
    ctx.require(std::abs(b.x() - a.x() - dx) < 1e-9 && std::abs(b.y() - a.y()) < 1e-9,
                "foothold not translation-equivariant");
  }
  return ctx.pass;
}

bool check_swing_torque_limits(Ctx& ctx) {
  Rng rng(115);
  const RobotParams params;
  SwingConfig cfg;
  for (int i = 0; i < 2000; ++i) {
    RobotState state;
    state.pose.position = Vec2(rng.uniform(-1, 1), rng.uniform(0.1, 0.6));
    state.pose.pitch = rng.uniform(-1.0, 1.0);
    for (int j = 0; j < 4; ++j) {
      state.q[j] = rng.uniform(-kPi, kPi);
      state.qd[j] = rng.uniform(-30, 30);
    }
    const Vec2 target(state.pose.position.x() + rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec2 tau = swing_torques(state, i % 2 == 0 ? Leg::kFront : Leg::kRear, target, cfg,
                                   params);
    ctx.require(std::abs(tau[0]) <= params.tau_limit + 1e-9 &&
                    std::abs(tau[1]) <= params.tau_limit + 1e-9,
                "swing torque exceeds saturation limit");
  }
  return ctx.pass;
}

bool check_foothold_envelope(Ctx& ctx) {
  // Regression envelope for steady bounding with the frozen tuned config:
  // touchdown positions must alternate front/rear with bounded spread.
  RunConfig cfg = preset_accept_flat();
  Environment env = make_environment(cfg);
  ScriptedPolicy policy(cfg.policy.scripted);
  Observation obs = env.reset(make_terrain(cfg.terrain), 7);

  struct Touchdown {
    int leg;
    double x;
  };
  std::vector<Touchdown> touchdowns;
  std::array<bool, 2> prev = {false, false};
  for (int step = 0; step < 300 && !env.done(); ++step) {
    const StepResult result = env.step(policy.act(obs));
    obs = result.obs;
    for (const TickRecord& rec : env.last_step_ticks()) {
      const std::array<bool, 2> now = {rec.contact_front, rec.contact_rear};
      for (int leg = 0; leg < 2; ++leg) {
        if (now[leg] && !prev[leg]) touchdowns.push_back({leg, rec.x});
      }
      prev = now;
    }
  }
  ctx.note("touchdowns", touchdowns.size());
  ctx.require(touchdowns.size() >= 8, "too few touchdowns for an envelope");
  int alternations = 0;
  double max_spread = 0.0;
  for (std::size_t i = 1; i < touchdowns.size(); ++i) {
    if (touchdowns[i].leg != touchdowns[i - 1].leg) ++alternations;
    max_spread = std::max(max_spread, std::abs(touchdowns[i].x - touchdowns[i - 1].x));
  }
  ctx.note("alternation_frac",
           static_cast<double>(alternations) / std::max<std::size_t>(1, touchdowns.size() - 1));
  ctx.note("max_spread", max_spread);
  ctx.require(alternations >= static_cast<int>(0.7 * (touchdowns.size() - 1)),
              "touchdowns not alternating");
  ctx.require(max_spread < 1.0, "foothold spread " + fmt(max_spread));
  return ctx.pass;
}

// ---------------------------------------------------------------------------
// perception

bool check_latency_exactness(Ctx& ctx) {
  RunConfig cfg;
  cfg.env.timeout_s = 30.0;
  Environment env = make_environment(cfg);
  ScriptedPolicy policy(cfg.policy.scripted);
  Observation obs = env.reset(TerrainProfile::flat(50.0), 3);
  for (int step = 0; step < 300 && !env.done(); ++step) {
    const StepResult result = env.step(policy.act(obs));
    obs = result.obs;
    const long expect = step < cfg.perception.delay_steps
                            ? 0
                            : static_cast<long>(step) - cfg.perception.delay_steps;
    ctx.require(result.info.fetched_capture_step == expect,
                "fetched frame " + std::to_string(result.info.fetched_capture_step) +
                    " at step " + std::to_string(step));
    if (result.done) break;
  }
  return ctx.pass;
}

bool check_unprojection_on_surface(Ctx& ctx) {
  const TerrainProfile terrain = generate_terrain({TerrainKind::kStairs, 5, 11});
  CameraModel cam;
  cam.noise_std = 0.0;
  TrunkPose pose;
  pose.position = Vec2(0.2, 0.34);
  Rng rng(116);
  const DepthFrame frame = render_depth(pose, terrain, cam, rng, 0);
  const auto rays = camera_rays(pose, cam);
  double worst = 0.0;
  for (int i = 0; i < cam.n_rays; ++i) {
    if (frame.depths[i] >= cam.max_range - 1e-9) continue;
    const Vec2 p = rays[i].origin + frame.depths[i] * rays[i].direction;
    // Distance to the surface: floor height mismatch or riser proximity.
    double d = std::abs(p.y() - height_at(terrain, p.x()));
    for (const Breakpoint& bp : terrain.breakpoints) {
      d = std::min(d, std::abs(p.x() - bp.x));
    }
    worst = std::max(worst, d);
  }
  ctx.note("max_surface_dist", worst);
  ctx.require(worst < 1e-9, "unprojected point off surface by " + fmt(worst));
  return ctx.pass;
}

bool check_memory_fixed_point(Ctx& ctx) {
  PerceptionConfig cfg;
  cfg.camera.noise_std = 0.0;
  const TerrainProfile terrain = generate_terrain({TerrainKind::kSingleStep, 5, 2});
  TrunkPose pose;
  pose.position = Vec2(0.4, 0.33);
  Rng rng(117);
  HeightmapMemory memory(cfg);
  const DepthFrame frame = render_depth(pose, terrain, cfg.camera, rng, 0);
  for (int i = 0; i < 10; ++i) memory.integrate_frame(frame);
  HeightmapConfig hm_cfg;
  QueryDiagnostics diag_a;
  const Heightmap a = memory.query(pose.position.x(), hm_cfg, &diag_a);
  memory.integrate_frame(frame);
  QueryDiagnostics diag_b;
  const Heightmap b = memory.query(pose.position.x(), hm_cfg, &diag_b);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    ctx.require(std::abs(a.values[i] - b.values[i]) < 1e-12,
                "repeated observation moved cell " + std::to_string(i));
  }
  return ctx.pass;
}

bool check_query_contract(Ctx& ctx) {
  PerceptionConfig cfg;
  HeightmapMemory memory(cfg);
  HeightmapConfig hm_cfg;
  QueryDiagnostics diag;
  const Heightmap hm = memory.query(1.7, hm_cfg, &diag);
  ctx.require(static_cast<int>(hm.values.size()) == hm_cfg.cells, "wrong cell count");
  ctx.require(hm.cell_size == hm_cfg.cell_size, "wrong cell size");
  ctx.require(std::abs(hm.origin_x - (1.7 + hm_cfg.x_min)) < 1e-12, "wrong origin");
  ctx.require(diag.low_confidence, "empty memory not flagged low confidence");
  for (double v : hm.values) ctx.require(v == 0.0, "empty memory query nonzero");
  return ctx.pass;
}

// ---------------------------------------------------------------------------
// env

bool check_env_determinism(Ctx& ctx) {
  RunConfig cfg;
  cfg.env.timeout_s = 2.0;
  cfg.env.train_mode = true;  // cover the heightmap randomization path too
  const auto run = [&]() {
    Environment env = make_environment(cfg);
    ScriptedPolicy policy(cfg.policy.scripted);
    Observation obs = env.reset(TerrainProfile::flat(), 9);
    std::vector<TickRecord> all;
    for (int step = 0; step < 100 && !env.done(); ++step) {
      obs = env.step(policy.act(obs)).obs;
      const auto& ticks = env.last_step_ticks();
      all.insert(all.end(), ticks.begin(), ticks.end());
    }
    return all;
  };
  const auto a = run();
  const auto b = run();
  ctx.require(a.size() == b.size(), "tick counts differ");
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    ctx.require(tick_equal(a[i], b[i]), "tick " + std::to_string(i) + " differs");
  }
  return ctx.pass;
}

bool check_observation_contract(Ctx& ctx) {
  RunConfig cfg;
  cfg.env.timeout_s = 2.0;
  Environment env = make_environment(cfg);
  ScriptedPolicy policy(cfg.policy.scripted);
  Observation obs = env.reset(generate_terrain({TerrainKind::kStairs, 2, 1}), 4);
  const std::size_t expected = Observation::flat_size(cfg.env.heightmap.cells);
  for (int step = 0; step < 100 && !env.done(); ++step) {
    const std::vector<double> flat = obs.flatten();
    ctx.require(flat.size() == expected, "observation size changed");
    for (double v : flat) ctx.require(std::isfinite(v), "non-finite observation entry");
    obs = env.step(policy.act(obs)).obs;
  }
  return ctx.pass;
}

bool check_reward_decomposition(Ctx& ctx) {
  RunConfig cfg;
  cfg.env.timeout_s = 2.0;
  Environment env = make_environment(cfg);
  ScriptedPolicy policy(cfg.policy.scripted);
  Observation obs = env.reset(TerrainProfile::flat(), 5);
  for (int step = 0; step < 100 && !env.done(); ++step) {
    const StepResult r = env.step(policy.act(obs));
    obs = r.obs;
    const RewardTerms& t = r.info.reward_terms;
    const double sum = t.forward_progress + t.qp_tracking + t.contact_match + t.alive +
                       t.torque_penalty + t.termination;
    ctx.require(std::abs(r.reward - sum) < 1e-12, "reward != sum of terms");
  }
  return ctx.pass;
}

bool check_action_clamp_equivalence(Ctx& ctx) {
  RunConfig cfg;
  cfg.env.timeout_s = 1.0;
  ActionCommand wild;
  wild.frequency = 99.0;
  wild.v_x_ref = 50.0;
  wild.v_z_ref = -50.0;
  wild.omega_ref = 100.0;
  wild.residual_front = Vec2(9.0, -9.0);
  wild.residual_rear = Vec2(-9.0, 9.0);
  const ActionCommand clamped = cfg.env.bounds.clamp(wild);

  const auto run = [&](const ActionCommand& a) {
    Environment env = make_environment(cfg);
    env.reset(TerrainProfile::flat(), 6);
    std::vector<TickRecord> all;
    for (int step = 0; step < 50 && !env.done(); ++step) {
      env.step(a);
      const auto& ticks = env.last_step_ticks();
      all.insert(all.end(), ticks.begin(), ticks.end());
    }
    return all;
  };
  const auto a = run(wild);
  const auto b = run(clamped);
  ctx.require(a.size() == b.size(), "lengths differ");
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    ctx.require(tick_equal(a[i], b[i]), "clamped run differs");
  }
  return ctx.pass;
}

bool check_rate_contract(Ctx& ctx) {
  RunConfig cfg;
  cfg.env.timeout_s = 5.0;
  Environment env = make_environment(cfg);
  ScriptedPolicy policy(cfg.policy.scripted);
  Observation obs = env.reset(TerrainProfile::flat(), 8);
  int steps = 0;
  long expected_ticks = 0;
  for (; steps < 60 && !env.done(); ++steps) {
    const StepResult r = env.step(policy.act(obs));
    obs = r.obs;
    expected_ticks += static_cast<long>(env.last_step_ticks().size());
    // Every step that does not terminate mid-way runs exactly 5 control ticks.
    if (!r.info.termination) {
      ctx.require(env.last_step_ticks().size() == 5, "expected 5 control ticks per env step");
    }
  }
  ctx.require(env.control_ticks_total() == expected_ticks, "tick accounting mismatch");
  ctx.require(env.perception_updates_total() == steps, "expected 1 perception update per step");
  return ctx.pass;
}

struct CheckEntry {
  const char* module;
  const char* name;
  bool (*fn)(Ctx&);
};

const CheckEntry kChecks[] = {
    {"geometry", "ik_fk_roundtrip", check_ik_fk_roundtrip},
    {"geometry", "jacobian_finite_difference", check_jacobian_fd},
    {"geometry", "transform_velocity_consistency", check_transform_velocity},
    {"geometry", "rotation_orthonormal", check_rotation_orthonormal},
    {"terrain", "generation_deterministic", check_terrain_deterministic},
    {"terrain", "flat_heightmap_zero", check_flat_heightmap_zero},
    {"terrain", "randomize_preserves_metadata", check_randomize_metadata},
    {"terrain", "difficulty_monotone", check_difficulty_monotone},
    {"gait", "mode_sequence", check_mode_sequence},
    {"gait", "phase_monotone", check_phase_monotone},
    {"gait", "no_double_stance", check_no_double_stance},
    {"gait", "swing_progress_monotone", check_swing_progress_monotone},
    {"sim", "flight_ballistics", check_flight_ballistics},
    {"sim", "contact_unilateral", check_contact_unilateral},
    {"sim", "saturation_properties", check_saturation_properties},
    {"sim", "determinism", check_sim_determinism},
    {"stance_control", "qp_kkt", check_qp_kkt},
    {"stance_control", "qp_oracle", check_qp_oracle},
    {"stance_control", "qp_permutation", check_qp_permutation},
    {"stance_control", "qp_cone_feasibility", check_qp_cone_feasibility},
    {"stance_control", "qp_cost_monotone", check_qp_cost_monotone},
    {"stance_control", "eq4_identity", check_eq4_identity_production},
    {"swing_control", "trajectory_endpoints", check_trajectory_endpoints},
    {"swing_control", "raibert_equivariance", check_raibert_equivariance},
    {"swing_control", "torque_within_limits", check_swing_torque_limits},
    {"swing_control", "foothold_envelope", check_foothold_envelope},
    {"perception", "latency_exactness", check_latency_exactness},
    {"perception", "unprojection_on_surface", check_unprojection_on_surface},
    {"perception", "memory_fixed_point", check_memory_fixed_point},
    {"perception", "query_contract", check_query_contract},
    {"env", "determinism", check_env_determinism},
    {"env", "observation_contract", check_observation_contract},
    {"env", "reward_decomposition", check_reward_decomposition},
    {"env", "action_clamp_equivalence", check_action_clamp_equivalence},
    {"env", "rate_contract", check_rate_contract},
};

}  // namespace

bool check_foot_velocity_inverse_identity(const FootVelocityFn& fn, int samples,
                                          std::string* detail) {
  Rng rng(118);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    TrunkPose pose;
    pose.position = Vec2(rng.uniform(-2, 2), rng.uniform(0.1, 0.6));
    pose.pitch = rng.uniform(-1.2, 1.2);
    const Vec2 p_foot(rng.uniform(-0.4, 0.4), rng.uniform(-0.45, -0.05));
    const Vec2 v_ref(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const double omega_ref = rng.uniform(-4, 4);

    const Vec2 v_foot_body = fn(v_ref, omega_ref, p_foot, pose);
    TrunkVelocity vel;
    vel.linear = v_ref;
    vel.pitch_rate = omega_ref;
    worst = std::max(worst, world_foot_velocity(v_foot_body, p_foot, pose, vel).norm());
  }
  if (detail != nullptr) *detail = "max_residual=" + fmt(worst);
  return worst < 1e-12;
}

std::vector<CheckResult> run_property_checks(const std::string& subset) {
  std::vector<CheckResult> results;
  for (const CheckEntry& entry : kChecks) {
    const std::string module = entry.module;
    const std::string name = entry.name;
    if (!subset.empty() && module.find(subset) == std::string::npos &&
        name.find(subset) == std::string::npos) {
      continue;
    }
    Ctx ctx;
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = entry.fn(ctx);
    } catch (const std::exception& e) {
      ctx.pass = false;
      ctx.detail = std::string("exception: ") + e.what();
    }
    const auto stop = std::chrono::steady_clock::now();
    results.push_back({module, name, pass && ctx.pass, ctx.detail,
                       std::chrono::duration<double>(stop - start).count()});
  }
  return results;
}

std::string checks_to_json(const std::vector<CheckResult>& results) {
  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  bool all = true;
  for (const CheckResult& r : results) {
    j["checks"].push_back({{"module", r.module},
                           {"name", r.name},
                           {"pass", r.pass},
                           {"detail", r.detail},
                           {"seconds", r.seconds}});
    all = all && r.pass;
  }
  j["all_pass"] = all;
  return j.dump(2) + "\n";
}

}  // namespace salto
