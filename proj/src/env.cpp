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

#include "salto/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace salto {

ActionCommand ActionBounds::clamp(const ActionCommand& a) const {
  ActionCommand c = a;
  c.frequency = std::clamp(a.frequency, f_min, f_max);
  for (Vec2* r : {&c.residual_front, &c.residual_rear}) {
    (*r)[0] = std::clamp((*r)[0], -residual, residual);
    (*r)[1] = std::clamp((*r)[1], -residual, residual);
  }
  c.v_x_ref = std::clamp(a.v_x_ref, v_x_min, v_x_max);
  c.v_z_ref = std::clamp(a.v_z_ref, v_z_min, v_z_max);
  c.omega_ref = std::clamp(a.omega_ref, omega_min, omega_max);
  return c;
}

std::vector<double> Observation::flatten() const {
  std::vector<double> v;
  v.reserve(flat_size(static_cast<int>(heightmap.size())));
  v.push_back(trunk_height);
  v.push_back(pitch);
  v.push_back(v_x);
  v.push_back(v_z);
  v.push_back(omega);
  for (int i = 0; i < 4; ++i) v.push_back(q[i]);
  for (int i = 0; i < 4; ++i) v.push_back(qd[i]);
  v.push_back(gait_sin);
  v.push_back(gait_cos);
  v.push_back(prev_frequency);
  v.insert(v.end(), heightmap.begin(), heightmap.end());
  return v;
}

RewardTerms compute_reward(const TransitionData& data, const RewardWeights& weights) {
  RewardTerms terms;
  terms.forward_progress = weights.forward * data.forward_displacement;
  terms.qp_tracking = -weights.qp * data.qp_cost_sum;
  terms.contact_match = weights.contact * data.contact_match_fraction;
  terms.alive = weights.alive;
  terms.torque_penalty = -weights.torque * data.torque_squared_sum;
  terms.termination = data.terminated_failure ? -weights.termination : 0.0;
  return terms;
}

Environment::Environment(EnvConfig env_config, RobotParams robot_params, GaitConfig gait_config,
                         StanceControlConfig stance_config, SwingConfig swing_config,
                         PerceptionConfig perception_config)
    : env_config_(env_config),
      robot_params_(robot_params),
      gait_config_(gait_config),
      stance_config_(stance_config),
      swing_config_(swing_config),
      perception_config_(perception_config),
      latency_(perception_config.delay_steps),
      memory_(perception_config) {}

Observation Environment::reset(const TerrainProfile& terrain, std::uint64_t seed) {
  terrain_ = terrain;
  rng_ = Rng(seed);

  state_ = RobotState{};
  state_.pose.position =
      Vec2(env_config_.spawn_x, height_at(terrain_, env_config_.spawn_x) + env_config_.spawn_height);
  for (Leg leg : {Leg::kFront, Leg::kRear}) {
    // Feet start on the ground (or at full reach below the hips when spawned
    // high), trimmed toward the trunk center so the first stance window keeps
    // its pitch moment controllable.
    const double inset = leg == Leg::kFront ? -swing_config_.foothold_inset
                                            : swing_config_.foothold_inset;
    const LegGeometry& geom = robot_params_.geometry(leg);
    const Vec2 target = clamp_to_reach(Vec2(inset, -env_config_.spawn_height), geom);
    const Vec2 q = inverse_kinematics(target, geom).value();
    state_.q.segment<2>(2 * leg_index(leg)) = q;
    liftoff_[leg_index(leg)] = foot_state(state_, leg, robot_params_).position_world;
  }

  gait_ = GaitState{};
  prev_frequency_ = gait_.frequency;
  prev_schedule_ = {true, false};  // phase 0 is front stance
  latency_ = LatencyBuffer(perception_config_.delay_steps);
  memory_.clear();
  last_heightmap_ = Heightmap{};
  last_heightmap_.values.assign(env_config_.heightmap.cells, 0.0);
  last_heightmap_.origin_x = env_config_.spawn_x + env_config_.heightmap.x_min;
  last_heightmap_.cell_size = env_config_.heightmap.cell_size;
  last_ground_reference_ = height_at(terrain_, env_config_.spawn_x);
  last_low_confidence_ = true;
  last_grf_ = GrfSolution{};
  have_last_grf_ = false;
  done_ = false;
  step_count_ = 0;
  control_ticks_total_ = 0;
  perception_updates_total_ = 0;
  tick_records_.clear();

  return assemble_observation();
}

double Environment::observed_terrain_height(double x) const {
  if (last_heightmap_.values.empty()) return last_ground_reference_;
  const int n = static_cast<int>(last_heightmap_.values.size());
  const int idx = std::clamp(
      static_cast<int>(std::lround((x - last_heightmap_.origin_x) / last_heightmap_.cell_size)),
      0, n - 1);
  return last_heightmap_.values[idx] + last_ground_reference_;
}

StepResult Environment::step(const ActionCommand& action_in) {
  StepResult result;
  if (done_) {
    result.done = true;
    result.obs = assemble_observation();
    return result;
  }

  const ActionCommand action = env_config_.bounds.clamp(action_in);
  const double dt_tick = env_config_.physics_dt * env_config_.physics_substeps;
  const double x_start = state_.pose.position.x();

  TransitionData data;
  tick_records_.clear();
  int contact_matches = 0;
  std::optional<Termination> termination;
  std::string diagnostics;

  for (int tick = 0; tick < env_config_.control_ticks_per_step && !termination; ++tick) {
    gait_ = advance_phase(gait_, action.frequency, dt_tick, gait_config_);
    const ContactSchedule schedule = scheduled_contacts(gait_, gait_config_);
    std::array<bool, kNumLegs> stance = {schedule.front, schedule.rear};
    // Early-touchdown promotion: a foot that lands in the tail of its swing
    // window is handed to the stance controller instead of being dragged
    // along the remaining swing trajectory.
    for (Leg leg : {Leg::kFront, Leg::kRear}) {
      const int i = leg_index(leg);
      if (stance[i] || !state_.foot_contact[i]) continue;
      const auto progress = swing_progress(gait_, leg, gait_config_);
      if (progress && *progress > 0.5) stance[i] = true;
    }

    // Swing bookkeeping: capture liftoff positions on stance -> swing edges.
    for (Leg leg : {Leg::kFront, Leg::kRear}) {
      const int i = leg_index(leg);
      if (prev_schedule_[i] && !stance[i]) {
        liftoff_[i] = foot_state(state_, leg, robot_params_).position_world;
      }
    }
    prev_schedule_ = stance;

    const double height_est =
        state_.pose.position.y() - observed_terrain_height(state_.pose.position.x());
    const double v_z_trim =
        env_config_.height_trim_gain * (env_config_.nominal_height - height_est);
    const Vec3 v_ref(action.v_x_ref, action.v_z_ref + v_z_trim, action.omega_ref);
    Vec4 tau = Vec4::Zero();
    double qp_cost = 0.0;

    if (stance[0] || stance[1]) {
      auto cmd = stance_torques(state_, stance, v_ref, stance_config_, robot_params_);
      if (cmd) {
        tau = cmd->torques;
        last_grf_ = cmd->grf;
        have_last_grf_ = true;
        qp_cost = cmd->grf.cost;
      } else if (have_last_grf_) {
        // Solver fallback: reuse the previous forces through the current
        // Jacobians.
        std::size_t j = 0;
        for (Leg leg : {Leg::kFront, Leg::kRear}) {
          if (!stance[leg_index(leg)] || j >= last_grf_.forces.size()) continue;
          const Mat2 jac = leg_jacobian(state_.leg_q(leg), robot_params_.geometry(leg));
          tau.segment<2>(2 * leg_index(leg)) =
              grf_to_torque(last_grf_.forces[j++], state_.pose, jac);
        }
        qp_cost = last_grf_.cost;
      }
    }

    for (Leg leg : {Leg::kFront, Leg::kRear}) {
      const int i = leg_index(leg);
      if (stance[i]) continue;
      const auto progress = swing_progress(gait_, leg, gait_config_);
      if (!progress) continue;
      const LegGeometry& geom = robot_params_.geometry(leg);
      const Vec2 hip_world = body_to_world(Vec2(geom.hip_offset_x, 0.0), state_.pose);
      SwingTarget target;
      target.nominal = raibert_foothold(
          hip_world, state_.vel.linear, Vec2(action.v_x_ref, action.v_z_ref), gait_.frequency,
          swing_config_, [this](double x) { return observed_terrain_height(x); });
      target.nominal.x() +=
          leg == Leg::kFront ? -swing_config_.foothold_inset : swing_config_.foothold_inset;
      target.nominal.y() = observed_terrain_height(target.nominal.x());
      target.residual = leg == Leg::kFront ? action.residual_front : action.residual_rear;
      const Vec2 p_des = swing_trajectory_point(liftoff_[i], target, *progress, swing_config_);
      tau.segment<2>(2 * i) = swing_torques(state_, leg, p_des, swing_config_, robot_params_);
    }

    try {
      for (int sub = 0; sub < env_config_.physics_substeps; ++sub) {
        state_ = step_physics(state_, tau, terrain_, robot_params_, env_config_.physics_dt);
      }
    } catch (const NonFiniteError& e) {
      termination = Termination::kNonFinite;
      diagnostics = e.what();
    }

    if (!termination) termination = detect_termination(state_, terrain_, robot_params_);

    for (int i = 0; i < kNumLegs; ++i) {
      if (state_.foot_contact[i] == stance[i]) ++contact_matches;
    }
    data.qp_cost_sum += qp_cost;
    data.torque_squared_sum += tau.squaredNorm();
    ++control_ticks_total_;

    TickRecord rec;
    rec.t = state_.time;
    rec.x = state_.pose.position.x();
    rec.z = state_.pose.position.y();
    rec.theta = state_.pose.pitch;
    rec.vx = state_.vel.linear.x();
    rec.vz = state_.vel.linear.y();
    rec.omega = state_.vel.pitch_rate;
    rec.phi = gait_.phase;
    rec.contact_front = state_.foot_contact[0];
    rec.contact_rear = state_.foot_contact[1];
    rec.tau = tau;
    rec.qp_cost = qp_cost;
    rec.v_ref = v_ref;
    tick_records_.push_back(rec);
  }

  prev_frequency_ = gait_.frequency;

  // Perception at the policy rate: render, delay, integrate, query.
  Rng noise_rng = rng_.spawn(0x5eed0000 + static_cast<std::uint64_t>(step_count_));
  const DepthFrame frame =
      render_depth(state_.pose, terrain_, perception_config_.camera, noise_rng, step_count_);
  if (depth_sink_ != nullptr) append_depth_frame(*depth_sink_, frame);
  const DepthFrame delayed = latency_.push_and_fetch(frame);
  memory_.integrate_frame(delayed);
  QueryDiagnostics diag;
  Heightmap hm = memory_.query(state_.pose.position.x(), env_config_.heightmap, &diag);
  if (env_config_.train_mode) {
    Rng shift_rng = rng_.spawn(0x7a9d0000 + static_cast<std::uint64_t>(step_count_));
    hm = randomize_heightmap(hm, env_config_.heightmap, shift_rng);
  }
  last_heightmap_ = hm;
  last_ground_reference_ = diag.ground_reference;
  last_low_confidence_ = diag.low_confidence;
  ++perception_updates_total_;
  ++step_count_;

  const bool timeout = state_.time >= env_config_.timeout_s - 1e-9;
  data.forward_displacement = state_.pose.position.x() - x_start;
  const int ticks_run = static_cast<int>(tick_records_.size());
  data.contact_match_fraction =
      ticks_run > 0 ? static_cast<double>(contact_matches) / (2.0 * ticks_run) : 0.0;
  data.terminated_failure = termination.has_value();

  result.info.reward_terms = compute_reward(data, env_config_.reward);
  result.reward = result.info.reward_terms.total();
  if (!tick_records_.empty()) {
    tick_records_.back().reward_total = result.reward;
    tick_records_.back().reward_terms = result.info.reward_terms;
  }

  done_ = termination.has_value() || timeout;
  result.done = done_;
  result.info.termination = termination;
  result.info.timeout = timeout && !termination;
  result.info.fetched_capture_step = delayed.capture_step;
  result.info.diagnostics = diagnostics;
  result.obs = assemble_observation();
  return result;
}

Observation Environment::assemble_observation() {
  Observation obs;
  obs.trunk_height =
      state_.pose.position.y() - height_at(terrain_, state_.pose.position.x());
  obs.pitch = state_.pose.pitch;
  obs.v_x = state_.vel.linear.x();
  obs.v_z = state_.vel.linear.y();
  obs.omega = state_.vel.pitch_rate;
  obs.q = state_.q;
  obs.qd = state_.qd;
  obs.gait_sin = std::sin(gait_.phase);
  obs.gait_cos = std::cos(gait_.phase);
  obs.prev_frequency = prev_frequency_;
  obs.heightmap = last_heightmap_.values;
  obs.heightmap_low_confidence = last_low_confidence_;
  return obs;
}

ActionCommand scripted_policy(const Observation& obs, const ScriptedPolicyParams& params) {
  ActionCommand a;
  a.frequency = params.frequency;
  a.v_z_ref = 0.0;
  a.omega_ref = params.pitch_gain * (0.0 - obs.pitch);
  a.v_x_ref = params.cruise_speed;
  // Slow down when the observed map drops off just ahead.
  for (std::size_t i = 0; i < obs.heightmap.size(); ++i) {
    const double x_rel = params.heightmap_x_min + i * params.heightmap_cell_size;
    if (x_rel <= 0.0 || x_rel > params.lookahead) continue;
    if (obs.heightmap[i] < -params.drop_threshold) {
      a.v_x_ref = params.slow_speed;
      break;
    }
  }
  return a;
}

ActionCommand ReplayPolicy::act(const Observation&) {
  if (actions_.empty()) return ActionCommand{};
  if (cursor_ >= actions_.size()) return actions_.back();
  return actions_[cursor_++];
}

ReplayPolicy ReplayPolicy::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open action log: " + path);
  std::vector<ActionCommand> actions;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) actions.push_back(action_from_json_line(line));
  }
  return ReplayPolicy(std::move(actions));
}

std::string action_to_json_line(const ActionCommand& a) {
  nlohmann::json j;
  j["f"] = a.frequency;
  j["p_r_front"] = {a.residual_front.x(), a.residual_front.y()};
  j["p_r_rear"] = {a.residual_rear.x(), a.residual_rear.y()};
  j["v_x_ref"] = a.v_x_ref;
  j["v_z_ref"] = a.v_z_ref;
  j["omega_y_ref"] = a.omega_ref;
  return j.dump();
}

ActionCommand action_from_json_line(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  ActionCommand a;
  a.frequency = j.at("f").get<double>();
  a.residual_front = Vec2(j.at("p_r_front")[0].get<double>(), j.at("p_r_front")[1].get<double>());
  a.residual_rear = Vec2(j.at("p_r_rear")[0].get<double>(), j.at("p_r_rear")[1].get<double>());
  a.v_x_ref = j.at("v_x_ref").get<double>();
  a.v_z_ref = j.at("v_z_ref").get<double>();
  a.omega_ref = j.at("omega_y_ref").get<double>();
  return a;
}

}  // namespace salto
