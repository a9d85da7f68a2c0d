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

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "salto/gait.hpp"
#include "salto/perception.hpp"
#include "salto/sim.hpp"
#include "salto/stance_control.hpp"
#include "salto/swing_control.hpp"
#include "salto/terrain.hpp"

namespace salto {

// The policy's action tuple: gait frequency, swing residuals, and reference
// body velocities.
struct ActionCommand {
  double frequency = 2.0;              // [Hz]
  Vec2 residual_front = Vec2::Zero();  // world-frame touchdown offsets [m]
  Vec2 residual_rear = Vec2::Zero();
  double v_x_ref = 0.0;   // [m/s]
  double v_z_ref = 0.0;   // [m/s]
  double omega_ref = 0.0; // [rad/s]
};

struct ActionBounds {
  double f_min = 0.5, f_max = 3.5;
  double residual = 0.15;
  double v_x_min = -1.0, v_x_max = 3.0;
  double v_z_min = -2.0, v_z_max = 3.0;
  double omega_min = -4.0, omega_max = 4.0;

  ActionCommand clamp(const ActionCommand& a) const;
};

struct Observation {
  double trunk_height = 0.0;  // above local ground [m]
  double pitch = 0.0;
  double v_x = 0.0, v_z = 0.0;
  double omega = 0.0;
  Vec4 q = Vec4::Zero();
  Vec4 qd = Vec4::Zero();
  double gait_sin = 0.0, gait_cos = 0.0;
  double prev_frequency = 0.0;
  std::vector<double> heightmap;
  bool heightmap_low_confidence = false;  // diagnostics only, not flattened

  std::vector<double> flatten() const;
  static std::size_t flat_size(int heightmap_cells) {
    return 16 + static_cast<std::size_t>(heightmap_cells);
  }
};

struct RewardWeights {
  double forward = 2.0;
  double qp = 1e-3;
  double contact = 0.1;
  double alive = 0.025;     // per environment step
  double torque = 1e-5;
  double termination = 10.0;  // subtracted on failure
};

struct RewardTerms {
  double forward_progress = 0.0;
  double qp_tracking = 0.0;
  double contact_match = 0.0;
  double alive = 0.0;
  double torque_penalty = 0.0;
  double termination = 0.0;

  double total() const {
    return forward_progress + qp_tracking + contact_match + alive + torque_penalty + termination;
  }
};

// Per-environment-step aggregates the reward is computed from.
struct TransitionData {
  double forward_displacement = 0.0;
  double qp_cost_sum = 0.0;             // summed over control ticks
  double contact_match_fraction = 0.0;  // over ticks and legs, [0, 1]
  double torque_squared_sum = 0.0;
  bool terminated_failure = false;
};

RewardTerms compute_reward(const TransitionData& data, const RewardWeights& weights);

struct EnvConfig {
  double timeout_s = 10.0;
  int control_ticks_per_step = 5;  // 100 Hz policy over 500 Hz control
  int physics_substeps = 2;        // 1 kHz physics under 500 Hz control
  double physics_dt = 0.001;
  double spawn_height = 0.30;
  double spawn_x = 0.0;
  bool train_mode = false;  // apply heightmap randomization to observations
  // Standing-height regulator folded into the commanded vertical velocity:
  // v_z_cmd = v_z_ref + gain * (nominal_height - estimated height). Velocity
  // references alone cannot replenish the height lost to braking catches, so
  // scripted policies (which pin v_z_ref = 0) need this trim; a trained
  // policy would supply the same correction through its own v_z_ref.
  double height_trim_gain = 0.0;
  double nominal_height = 0.30;
  RewardWeights reward;
  ActionBounds bounds;
  HeightmapConfig heightmap;
};

// One control tick of telemetry, the rollout log row.
struct TickRecord {
  double t = 0.0;
  double x = 0.0, z = 0.0, theta = 0.0;
  double vx = 0.0, vz = 0.0, omega = 0.0;
  double phi = 0.0;
  bool contact_front = false, contact_rear = false;
  Vec4 tau = Vec4::Zero();
  double qp_cost = 0.0;
  Vec3 v_ref = Vec3::Zero();
  double reward_total = 0.0;  // filled on the step's last tick
  RewardTerms reward_terms;
};

struct StepInfo {
  std::optional<Termination> termination;
  bool timeout = false;
  long fetched_capture_step = -1;
  RewardTerms reward_terms;
  std::string diagnostics;
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class Environment {
 public:
  Environment(EnvConfig env_config, RobotParams robot_params, GaitConfig gait_config,
              StanceControlConfig stance_config, SwingConfig swing_config,
              PerceptionConfig perception_config);

  Observation reset(const TerrainProfile& terrain, std::uint64_t seed);
  StepResult step(const ActionCommand& action);

  bool done() const { return done_; }
  // Optional binary depth log: every rendered frame is appended to the sink.
  void set_depth_sink(std::ostream* sink) { depth_sink_ = sink; }
  long step_count() const { return step_count_; }
  const RobotState& robot() const { return state_; }
  const TerrainProfile& terrain() const { return terrain_; }
  const EnvConfig& config() const { return env_config_; }
  const std::vector<TickRecord>& last_step_ticks() const { return tick_records_; }
  long control_ticks_total() const { return control_ticks_total_; }
  long perception_updates_total() const { return perception_updates_total_; }

 private:
  Observation assemble_observation();
  double observed_terrain_height(double x) const;

  EnvConfig env_config_;
  RobotParams robot_params_;
  GaitConfig gait_config_;
  StanceControlConfig stance_config_;
  SwingConfig swing_config_;
  PerceptionConfig perception_config_;

  TerrainProfile terrain_ = TerrainProfile::flat();
  RobotState state_;
  GaitState gait_;
  Rng rng_;
  LatencyBuffer latency_{5};
  HeightmapMemory memory_;
  Heightmap last_heightmap_;
  double last_ground_reference_ = 0.0;
  bool last_low_confidence_ = true;
  std::array<Vec2, kNumLegs> liftoff_;
  std::array<bool, kNumLegs> prev_schedule_ = {false, false};
  std::ostream* depth_sink_ = nullptr;
  GrfSolution last_grf_;
  bool have_last_grf_ = false;
  double prev_frequency_ = 0.0;
  bool done_ = true;
  long step_count_ = 0;
  long control_ticks_total_ = 0;
  long perception_updates_total_ = 0;
  std::vector<TickRecord> tick_records_;
};

// Policy contract: Observation -> ActionCommand (clamped by the env anyway).
class Policy {
 public:
  virtual ~Policy() = default;
  virtual ActionCommand act(const Observation& obs) = 0;
  virtual void reset() {}
  virtual std::string name() const = 0;
};

struct ScriptedPolicyParams {
  double frequency = 2.0;
  double cruise_speed = 0.8;
  double slow_speed = 0.3;
  double drop_threshold = 0.2;  // heightmap drop that triggers slowing [m]
  double lookahead = 0.4;       // [m]
  double pitch_gain = 2.0;      // omega_ref = gain * (0 - pitch)
  double heightmap_x_min = -0.2;
  double heightmap_cell_size = 0.05;
};

// Constant-frequency cruising with an edge-slowing heuristic; the stand-in
// for a trained policy in end-to-end tests.
ActionCommand scripted_policy(const Observation& obs, const ScriptedPolicyParams& params);

class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(ScriptedPolicyParams params = {}) : params_(params) {}
  ActionCommand act(const Observation& obs) override { return scripted_policy(obs, params_); }
  std::string name() const override { return "scripted"; }

 private:
  ScriptedPolicyParams params_;
};

class ZeroPolicy : public Policy {
 public:
  ActionCommand act(const Observation&) override {
    ActionCommand a;
    a.frequency = 0.0;
    a.v_x_ref = 0.0;
    return a;
  }
  std::string name() const override { return "zero"; }
};

// Plays back a recorded action sequence; holds the last action when the log
// runs out.
class ReplayPolicy : public Policy {
 public:
  explicit ReplayPolicy(std::vector<ActionCommand> actions) : actions_(std::move(actions)) {}
  static ReplayPolicy from_file(const std::string& path);

  ActionCommand act(const Observation&) override;
  void reset() override { cursor_ = 0; }
  std::string name() const override { return "replay"; }

 private:
  std::vector<ActionCommand> actions_;
  std::size_t cursor_ = 0;
};

// Adapter for externally computed actions (e.g. a learned policy driving the
// environment through a callback).
class CallbackPolicy : public Policy {
 public:
  using Fn = std::function<ActionCommand(const Observation&)>;
  explicit CallbackPolicy(Fn fn, std::string name = "external")
      : fn_(std::move(fn)), name_(std::move(name)) {}
  ActionCommand act(const Observation& obs) override { return fn_(obs); }
  std::string name() const override { return name_; }

 private:
  Fn fn_;
  std::string name_;
};

std::string action_to_json_line(const ActionCommand& a);
ActionCommand action_from_json_line(const std::string& line);

}  // namespace salto
