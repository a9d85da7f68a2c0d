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

#include "salto/rollout.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace salto {
namespace {

void print_value(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

}  // namespace

const char* RolloutLog::header() {
  return "t,x,z,theta,vx,vz,omega,phi,contact_front,contact_rear,"
         "tau1,tau2,tau3,tau4,qp_cost,reward_total,"
         "r_forward,r_qp,r_contact,r_alive,r_torque,r_termination,"
         "vx_ref,vz_ref,omega_ref";
}

RolloutLog::RolloutLog(std::ostream& os) : os_(os) { os_ << header() << "\n"; }

void RolloutLog::add(const TickRecord& r) {
  const double values[] = {r.t,
                           r.x,
                           r.z,
                           r.theta,
                           r.vx,
                           r.vz,
                           r.omega,
                           r.phi,
                           r.contact_front ? 1.0 : 0.0,
                           r.contact_rear ? 1.0 : 0.0,
                           r.tau[0],
                           r.tau[1],
                           r.tau[2],
                           r.tau[3],
                           r.qp_cost,
                           r.reward_total,
                           r.reward_terms.forward_progress,
                           r.reward_terms.qp_tracking,
                           r.reward_terms.contact_match,
                           r.reward_terms.alive,
                           r.reward_terms.torque_penalty,
                           r.reward_terms.termination,
                           r.v_ref.x(),
                           r.v_ref.y(),
                           r.v_ref.z()};
  bool first = true;
  for (double v : values) {
    if (!first) os_ << ',';
    print_value(os_, v);
    first = false;
  }
  os_ << "\n";
}

EpisodeSummary run_rollout(Environment& env, Policy& policy, const TerrainProfile& terrain,
                           std::uint64_t seed, int max_steps, RolloutLog* log,
                           std::vector<ActionCommand>* action_log) {
  EpisodeSummary summary;
  policy.reset();
  Observation obs = env.reset(terrain, seed);
  const double x_start = env.robot().pose.position.x();

  double reward_sum = 0.0;
  double tracking_sum = 0.0;
  long tick_count = 0;

  while (!env.done() && summary.steps < max_steps) {
    const ActionCommand action = policy.act(obs);
    if (action_log != nullptr) action_log->push_back(action);
    const StepResult result = env.step(action);
    ++summary.steps;
    reward_sum += result.reward;
    for (const TickRecord& rec : env.last_step_ticks()) {
      if (log != nullptr) log->add(rec);
      tracking_sum += (std::abs(rec.vx - rec.v_ref.x()) + std::abs(rec.vz - rec.v_ref.y()) +
                       std::abs(rec.omega - rec.v_ref.z())) /
                      3.0;
      ++tick_count;
    }
    if (result.done) {
      if (result.info.termination) {
        summary.termination = to_string(*result.info.termination);
      } else if (result.info.timeout) {
        summary.termination = "timeout";
      }
    }
    obs = result.obs;
  }
  if (!env.done() && summary.steps >= max_steps) summary.termination = "max_steps";

  summary.distance = env.robot().pose.position.x() - x_start;
  summary.mean_reward = summary.steps > 0 ? reward_sum / summary.steps : 0.0;
  summary.mean_abs_tracking_error = tick_count > 0 ? tracking_sum / tick_count : 0.0;
  return summary;
}

std::string summary_to_json_line(const EpisodeSummary& summary) {
  nlohmann::json j;
  j["distance"] = summary.distance;
  j["steps"] = summary.steps;
  j["termination"] = summary.termination;
  j["mean_reward"] = summary.mean_reward;
  j["mean_abs_tracking_error"] = summary.mean_abs_tracking_error;
  return j.dump();
}

}  // namespace salto
