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
#include <string>
#include <vector>

#include "salto/env.hpp"

namespace salto {

struct EpisodeSummary {
  double distance = 0.0;  // net forward displacement [m]
  int steps = 0;          // environment steps taken
  std::string termination = "none";  // none | timeout | max_steps | failure cause
  double mean_reward = 0.0;
  double mean_abs_tracking_error = 0.0;  // velocity components, averaged over ticks
};

// One row per control tick. Values print with round-trip precision so a
// replayed episode reproduces the file byte for byte.
class RolloutLog {
 public:
  explicit RolloutLog(std::ostream& os);
  void add(const TickRecord& record);

  static const char* header();

 private:
  std::ostream& os_;
};

// Resets the environment and drives it with the policy until done or
// max_steps. Optional sinks: per-tick CSV rows and the per-step action log
// replays feed on.
EpisodeSummary run_rollout(Environment& env, Policy& policy, const TerrainProfile& terrain,
                           std::uint64_t seed, int max_steps, RolloutLog* log = nullptr,
                           std::vector<ActionCommand>* action_log = nullptr);

std::string summary_to_json_line(const EpisodeSummary& summary);

}  // namespace salto
