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

#include "salto/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace salto {
namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::string& path,
                 std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("'" + path + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown config key '" + path + "." + it.key() + "'");
  }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void get_vec3(const json& j, const char* key, Vec3& out) {
  if (!j.contains(key)) return;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3) throw ConfigError(std::string(key) + " needs 3 entries");
  out = Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

void parse_terrain(const json& j, TerrainSetup& t) {
  expect_keys(j, "terrain", {"kind", "level", "seed", "extent", "file"});
  get_if(j, "kind", t.kind);
  get_if(j, "level", t.level);
  get_if(j, "seed", t.seed);
  get_if(j, "extent", t.extent);
  get_if(j, "file", t.file);
}

void parse_policy(const json& j, PolicySetup& p) {
  expect_keys(j, "policy", {"type", "replay_path", "scripted"});
  get_if(j, "type", p.type);
  get_if(j, "replay_path", p.replay_path);
  if (j.contains("scripted")) {
    const json& s = j.at("scripted");
    expect_keys(s, "policy.scripted",
                {"frequency", "cruise_speed", "slow_speed", "drop_threshold", "lookahead",
                 "pitch_gain"});
    get_if(s, "frequency", p.scripted.frequency);
    get_if(s, "cruise_speed", p.scripted.cruise_speed);
    get_if(s, "slow_speed", p.scripted.slow_speed);
    get_if(s, "drop_threshold", p.scripted.drop_threshold);
    get_if(s, "lookahead", p.scripted.lookahead);
    get_if(s, "pitch_gain", p.scripted.pitch_gain);
  }
}

void parse_robot(const json& j, RobotParams& r) {
  expect_keys(j, "robot",
              {"mass", "inertia", "l1", "l2", "hip_offset", "body_length", "body_height",
               "joint_reflected_inertia", "actuator_knots", "contact"});
  get_if(j, "mass", r.mass);
  get_if(j, "inertia", r.inertia);
  double l1 = r.geom_front.l1, l2 = r.geom_front.l2, hip = r.geom_front.hip_offset_x;
  get_if(j, "l1", l1);
  get_if(j, "l2", l2);
  get_if(j, "hip_offset", hip);
  r.geom_front = LegGeometry{l1, l2, hip};
  r.geom_rear = LegGeometry{l1, l2, -hip};
  get_if(j, "body_length", r.body_length);
  get_if(j, "body_height", r.body_height);
  get_if(j, "joint_reflected_inertia", r.joint_reflected_inertia);
  if (j.contains("actuator_knots")) {
    r.actuator.knots.clear();
    for (const auto& k : j.at("actuator_knots")) {
      if (!k.is_array() || k.size() != 2) throw ConfigError("actuator knot needs [cmd, out]");
      r.actuator.knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
  }
  try {
    r.actuator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("robot.actuator_knots: ") + e.what());
  }
  r.tau_limit = r.actuator.limit();
  if (j.contains("contact")) {
    const json& c = j.at("contact");
    expect_keys(c, "robot.contact", {"k_normal", "d_normal", "mu", "v_slip"});
    get_if(c, "k_normal", r.contact.k_normal);
    get_if(c, "d_normal", r.contact.d_normal);
    get_if(c, "mu", r.contact.mu);
    get_if(c, "v_slip", r.contact.v_slip);
  }
}

void parse_gait(const json& j, GaitConfig& g) {
  expect_keys(j, "gait", {"boundaries", "f_min", "f_max"});
  if (j.contains("boundaries")) {
    const auto& a = j.at("boundaries");
    if (!a.is_array() || a.size() != 3) throw ConfigError("gait.boundaries needs 3 entries");
    for (int i = 0; i < 3; ++i) g.boundaries[i] = a[i].get<double>();
    if (!(g.boundaries[0] > 0.0 && g.boundaries[0] < g.boundaries[1] &&
          g.boundaries[1] < g.boundaries[2] && g.boundaries[2] < kTwoPi)) {
      throw ConfigError("gait.boundaries must increase within (0, 2*pi)");
    }
  }
  get_if(j, "f_min", g.f_min);
  get_if(j, "f_max", g.f_max);
}

void parse_stance(const json& j, StanceControlConfig& s) {
  expect_keys(j, "stance",
              {"accel_weights", "force_reg", "k_v", "a_max", "k_d_fb", "det_min", "f_z_max",
               "qp_mode", "mu_scale"});
  get_vec3(j, "accel_weights", s.weights.accel_tracking);
  get_if(j, "force_reg", s.weights.force_reg);
  get_vec3(j, "k_v", s.reference.k_v);
  get_vec3(j, "a_max", s.reference.a_max);
  get_if(j, "k_d_fb", s.feedback.k_d_fb);
  get_if(j, "det_min", s.feedback.det_min);
  get_if(j, "f_z_max", s.f_z_max);
  get_if(j, "mu_scale", s.mu_scale);
  if (j.contains("qp_mode")) {
    const std::string mode = j.at("qp_mode").get<std::string>();
    if (mode == "exact") {
      s.mode = QpMode::kExact;
    } else if (mode == "approx") {
      s.mode = QpMode::kApprox;
    } else {
      throw ConfigError("stance.qp_mode must be 'exact' or 'approx'");
    }
  }
}

void parse_swing(const json& j, SwingConfig& s) {
  expect_keys(j, "swing", {"apex_height", "kp", "kd", "k_raibert", "foothold_inset"});
  get_if(j, "apex_height", s.apex_height);
  get_if(j, "kp", s.kp);
  get_if(j, "kd", s.kd);
  get_if(j, "k_raibert", s.k_raibert);
  get_if(j, "foothold_inset", s.foothold_inset);
}

void parse_perception(const json& j, PerceptionConfig& p) {
  expect_keys(j, "perception",
              {"delay_steps", "confidence_decay", "confidence_floor", "edge_delta",
               "window_behind", "window_ahead", "camera"});
  get_if(j, "delay_steps", p.delay_steps);
  get_if(j, "confidence_decay", p.confidence_decay);
  get_if(j, "confidence_floor", p.confidence_floor);
  get_if(j, "edge_delta", p.edge_delta);
  get_if(j, "window_behind", p.window_behind);
  get_if(j, "window_ahead", p.window_ahead);
  if (j.contains("camera")) {
    const json& c = j.at("camera");
    expect_keys(c, "perception.camera",
                {"mount_x", "mount_z", "mount_pitch", "fov", "n_rays", "max_range", "noise_std"});
    double mx = p.camera.mount_offset.x(), mz = p.camera.mount_offset.y();
    get_if(c, "mount_x", mx);
    get_if(c, "mount_z", mz);
    p.camera.mount_offset = Vec2(mx, mz);
    get_if(c, "mount_pitch", p.camera.mount_pitch);
    get_if(c, "fov", p.camera.fov);
    get_if(c, "n_rays", p.camera.n_rays);
    get_if(c, "max_range", p.camera.max_range);
    get_if(c, "noise_std", p.camera.noise_std);
  }
}

void parse_env(const json& j, EnvConfig& e) {
  expect_keys(j, "env",
              {"timeout_s", "control_ticks_per_step", "physics_substeps", "physics_dt",
               "spawn_height", "spawn_x", "train_mode", "height_trim_gain", "nominal_height",
               "reward", "bounds", "heightmap"});
  get_if(j, "timeout_s", e.timeout_s);
  get_if(j, "control_ticks_per_step", e.control_ticks_per_step);
  get_if(j, "physics_substeps", e.physics_substeps);
  get_if(j, "physics_dt", e.physics_dt);
  get_if(j, "spawn_height", e.spawn_height);
  get_if(j, "spawn_x", e.spawn_x);
  get_if(j, "train_mode", e.train_mode);
  get_if(j, "height_trim_gain", e.height_trim_gain);
  get_if(j, "nominal_height", e.nominal_height);
  if (j.contains("reward")) {
    const json& r = j.at("reward");
    expect_keys(r, "env.reward", {"forward", "qp", "contact", "alive", "torque", "termination"});
    get_if(r, "forward", e.reward.forward);
    get_if(r, "qp", e.reward.qp);
    get_if(r, "contact", e.reward.contact);
    get_if(r, "alive", e.reward.alive);
    get_if(r, "torque", e.reward.torque);
    get_if(r, "termination", e.reward.termination);
  }
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    expect_keys(b, "env.bounds",
                {"residual", "v_x_min", "v_x_max", "v_z_min", "v_z_max", "omega_min",
                 "omega_max"});
    get_if(b, "residual", e.bounds.residual);
    get_if(b, "v_x_min", e.bounds.v_x_min);
    get_if(b, "v_x_max", e.bounds.v_x_max);
    get_if(b, "v_z_min", e.bounds.v_z_min);
    get_if(b, "v_z_max", e.bounds.v_z_max);
    get_if(b, "omega_min", e.bounds.omega_min);
    get_if(b, "omega_max", e.bounds.omega_max);
  }
  if (j.contains("heightmap")) {
    const json& h = j.at("heightmap");
    expect_keys(h, "env.heightmap", {"cells", "cell_size", "x_min", "shift_range", "lift_range"});
    get_if(h, "cells", e.heightmap.cells);
    get_if(h, "cell_size", e.heightmap.cell_size);
    get_if(h, "x_min", e.heightmap.x_min);
    get_if(h, "shift_range", e.heightmap.shift_range);
    get_if(h, "lift_range", e.heightmap.lift_range);
  }
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  expect_keys(j, "config",
              {"seed", "max_steps", "out_dir", "depth_log", "terrain", "policy", "robot", "gait",
               "stance", "swing", "perception", "env"});
  RunConfig c;
  get_if(j, "seed", c.seed);
  get_if(j, "max_steps", c.max_steps);
  get_if(j, "out_dir", c.out_dir);
  get_if(j, "depth_log", c.depth_log);
  if (j.contains("terrain")) parse_terrain(j.at("terrain"), c.terrain);
  if (j.contains("policy")) parse_policy(j.at("policy"), c.policy);
  if (j.contains("robot")) parse_robot(j.at("robot"), c.robot);
  if (j.contains("gait")) parse_gait(j.at("gait"), c.gait);
  if (j.contains("stance")) parse_stance(j.at("stance"), c.stance);
  if (j.contains("swing")) parse_swing(j.at("swing"), c.swing);
  if (j.contains("perception")) parse_perception(j.at("perception"), c.perception);
  if (j.contains("env")) parse_env(j.at("env"), c.env);

  // Single sources of truth for shared values: friction from the contact
  // model (less the planning margin), gait frequency clamps, and the
  // heightmap grid spacing.
  c.stance.mu = c.stance.mu_scale * c.robot.contact.mu;
  c.env.bounds.f_min = c.gait.f_min;
  c.env.bounds.f_max = c.gait.f_max;
  c.perception.cell_size = c.env.heightmap.cell_size;
  c.policy.scripted.heightmap_x_min = c.env.heightmap.x_min;
  c.policy.scripted.heightmap_cell_size = c.env.heightmap.cell_size;
  return c;
}

json run_config_to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["max_steps"] = c.max_steps;
  j["out_dir"] = c.out_dir;
  j["depth_log"] = c.depth_log;
  j["terrain"] = {{"kind", c.terrain.kind}, {"level", c.terrain.level},
                  {"seed", c.terrain.seed}, {"extent", c.terrain.extent},
                  {"file", c.terrain.file}};
  j["policy"] = {{"type", c.policy.type},
                 {"replay_path", c.policy.replay_path},
                 {"scripted",
                  {{"frequency", c.policy.scripted.frequency},
                   {"cruise_speed", c.policy.scripted.cruise_speed},
                   {"slow_speed", c.policy.scripted.slow_speed},
                   {"drop_threshold", c.policy.scripted.drop_threshold},
                   {"lookahead", c.policy.scripted.lookahead},
                   {"pitch_gain", c.policy.scripted.pitch_gain}}}};
  json knots = json::array();
  for (const ActuatorKnot& k : c.robot.actuator.knots) knots.push_back({k.command, k.output});
  j["robot"] = {{"mass", c.robot.mass},
                {"inertia", c.robot.inertia},
                {"l1", c.robot.geom_front.l1},
                {"l2", c.robot.geom_front.l2},
                {"hip_offset", c.robot.geom_front.hip_offset_x},
                {"body_length", c.robot.body_length},
                {"body_height", c.robot.body_height},
                {"joint_reflected_inertia", c.robot.joint_reflected_inertia},
                {"actuator_knots", knots},
                {"contact",
                 {{"k_normal", c.robot.contact.k_normal},
                  {"d_normal", c.robot.contact.d_normal},
                  {"mu", c.robot.contact.mu},
                  {"v_slip", c.robot.contact.v_slip}}}};
  j["gait"] = {{"boundaries", {c.gait.boundaries[0], c.gait.boundaries[1], c.gait.boundaries[2]}},
               {"f_min", c.gait.f_min},
               {"f_max", c.gait.f_max}};
  j["stance"] = {{"accel_weights",
                  {c.stance.weights.accel_tracking[0], c.stance.weights.accel_tracking[1],
                   c.stance.weights.accel_tracking[2]}},
                 {"force_reg", c.stance.weights.force_reg},
                 {"k_v",
                  {c.stance.reference.k_v[0], c.stance.reference.k_v[1],
                   c.stance.reference.k_v[2]}},
                 {"a_max",
                  {c.stance.reference.a_max[0], c.stance.reference.a_max[1],
                   c.stance.reference.a_max[2]}},
                 {"k_d_fb", c.stance.feedback.k_d_fb},
                 {"det_min", c.stance.feedback.det_min},
                 {"f_z_max", c.stance.f_z_max},
                 {"mu_scale", c.stance.mu_scale},
                 {"qp_mode", c.stance.mode == QpMode::kExact ? "exact" : "approx"}};
  j["swing"] = {{"apex_height", c.swing.apex_height},
                {"kp", c.swing.kp},
                {"kd", c.swing.kd},
                {"k_raibert", c.swing.k_raibert},
                {"foothold_inset", c.swing.foothold_inset}};
  j["perception"] = {{"delay_steps", c.perception.delay_steps},
                     {"confidence_decay", c.perception.confidence_decay},
                     {"confidence_floor", c.perception.confidence_floor},
                     {"edge_delta", c.perception.edge_delta},
                     {"window_behind", c.perception.window_behind},
                     {"window_ahead", c.perception.window_ahead},
                     {"camera",
                      {{"mount_x", c.perception.camera.mount_offset.x()},
                       {"mount_z", c.perception.camera.mount_offset.y()},
                       {"mount_pitch", c.perception.camera.mount_pitch},
                       {"fov", c.perception.camera.fov},
                       {"n_rays", c.perception.camera.n_rays},
                       {"max_range", c.perception.camera.max_range},
                       {"noise_std", c.perception.camera.noise_std}}}};
  j["env"] = {{"timeout_s", c.env.timeout_s},
              {"control_ticks_per_step", c.env.control_ticks_per_step},
              {"physics_substeps", c.env.physics_substeps},
              {"physics_dt", c.env.physics_dt},
              {"spawn_height", c.env.spawn_height},
              {"spawn_x", c.env.spawn_x},
              {"train_mode", c.env.train_mode},
              {"height_trim_gain", c.env.height_trim_gain},
              {"nominal_height", c.env.nominal_height},
              {"reward",
               {{"forward", c.env.reward.forward},
                {"qp", c.env.reward.qp},
                {"contact", c.env.reward.contact},
                {"alive", c.env.reward.alive},
                {"torque", c.env.reward.torque},
                {"termination", c.env.reward.termination}}},
              {"bounds",
               {{"residual", c.env.bounds.residual},
                {"v_x_min", c.env.bounds.v_x_min},
                {"v_x_max", c.env.bounds.v_x_max},
                {"v_z_min", c.env.bounds.v_z_min},
                {"v_z_max", c.env.bounds.v_z_max},
                {"omega_min", c.env.bounds.omega_min},
                {"omega_max", c.env.bounds.omega_max}}},
              {"heightmap",
               {{"cells", c.env.heightmap.cells},
                {"cell_size", c.env.heightmap.cell_size},
                {"x_min", c.env.heightmap.x_min},
                {"shift_range", c.env.heightmap.shift_range},
                {"lift_range", c.env.heightmap.lift_range}}}};
  return j;
}

void apply_override(json& j, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("override must look like a.b=value: " + spec);
  const std::string path = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);

  json* node = &j;
  std::stringstream ss(path);
  std::string token;
  std::vector<std::string> tokens;
  while (std::getline(ss, token, '.')) {
    if (token.empty()) throw ConfigError("bad override path: " + spec);
    tokens.push_back(token);
  }
  if (tokens.empty()) throw ConfigError("bad override path: " + spec);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) node = &((*node)[tokens[i]]);

  json parsed = json::parse(value, nullptr, false);
  (*node)[tokens.back()] = parsed.is_discarded() ? json(value) : parsed;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw ConfigError("config parse error in " + path + ": " + e.what());
    }
  }
  for (const std::string& o : overrides) apply_override(j, o);
  if (!j.contains("seed")) {
    if (const char* env_seed = std::getenv("SALTOLAB_SEED")) {
      j["seed"] = static_cast<std::uint64_t>(std::strtoull(env_seed, nullptr, 10));
    }
  }
  return parse_run_config(j);
}

TerrainProfile make_terrain(const TerrainSetup& setup) {
  if (!setup.file.empty()) {
    std::ifstream in(setup.file);
    if (!in) throw ConfigError("cannot open terrain file: " + setup.file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    TerrainSpec spec;
    TerrainProfile profile;
    terrain_from_json(buffer.str(), spec, profile);
    return profile;
  }
  if (setup.kind == "flat") return TerrainProfile::flat(setup.extent);
  TerrainSpec spec{terrain_kind_from_string(setup.kind), setup.level, setup.seed};
  return generate_terrain(spec);
}

std::unique_ptr<Policy> make_policy(const PolicySetup& setup) {
  if (setup.type == "scripted") return std::make_unique<ScriptedPolicy>(setup.scripted);
  if (setup.type == "zero") return std::make_unique<ZeroPolicy>();
  if (setup.type == "replay") {
    if (setup.replay_path.empty()) throw ConfigError("replay policy needs policy.replay_path");
    return std::make_unique<ReplayPolicy>(ReplayPolicy::from_file(setup.replay_path));
  }
  throw ConfigError("unknown policy type: " + setup.type);
}

Environment make_environment(const RunConfig& config) {
  return Environment(config.env, config.robot, config.gait, config.stance, config.swing,
                     config.perception);
}

RunConfig preset_accept_flat() {
  // Frozen output of the flat-ground tuning harness (random search over the
  // controller, gait and contact knobs, scored on zero-action standing and
  // scripted cruising across seeds). Values are kept verbatim; the gait is
  // near-50% duty bounding with short flight exchanges.
  RunConfig c;
  c.seed = 42;
  c.max_steps = 500;
  c.terrain.kind = "flat";
  c.terrain.extent = 20.0;
  c.env.timeout_s = 5.0;

  c.gait.boundaries = {0.9685 * kPi, kPi, 1.9685 * kPi};
  c.gait.f_min = 2.705;

  c.swing.foothold_inset = 0.097;
  c.swing.apex_height = 0.058;
  c.swing.kp = 81.25;
  c.swing.kd = 0.58;
  c.swing.k_raibert = 0.063;

  c.stance.weights.accel_tracking = Vec3(0.182, 4.75, 0.2815);
  c.stance.reference.k_v = Vec3(2.715, 25.5, 4.95);
  c.stance.feedback.k_d_fb = 4.425;

  c.env.height_trim_gain = 1.9;
  c.robot.contact.k_normal = 38000.0;

  c.policy.scripted.frequency = 2.705;
  c.policy.scripted.cruise_speed = 0.5025;

  c.stance.mu = c.stance.mu_scale * c.robot.contact.mu;
  c.env.bounds.f_min = c.gait.f_min;
  c.env.bounds.f_max = c.gait.f_max;
  c.perception.cell_size = c.env.heightmap.cell_size;
  c.policy.scripted.heightmap_x_min = c.env.heightmap.x_min;
  c.policy.scripted.heightmap_cell_size = c.env.heightmap.cell_size;
  return c;
}

RunConfig preset_by_name(const std::string& name) {
  if (name == "default") return RunConfig{};
  if (name == "accept-flat") return preset_accept_flat();
  throw ConfigError("unknown preset: " + name);
}

}  // namespace salto
