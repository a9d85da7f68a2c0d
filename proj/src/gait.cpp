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

#include "salto/gait.hpp"

#include <algorithm>
#include <cmath>

namespace salto {

GaitState advance_phase(const GaitState& state, double f_cmd, double dt,
                        const GaitConfig& config) {
  GaitState next;
  next.frequency = std::clamp(f_cmd, config.f_min, config.f_max);
  next.phase = wrap_phase(state.phase + kTwoPi * next.frequency * dt);
  return next;
}

ContactSchedule scheduled_contacts(const GaitState& state, const GaitConfig& config) {
  ContactSchedule c;
  c.front = state.phase < config.boundaries[0];
  c.rear = state.phase >= config.boundaries[1] && state.phase < config.boundaries[2];
  return c;
}

std::optional<double> swing_progress(const GaitState& state, Leg leg, const GaitConfig& config) {
  const double phi = state.phase;
  if (leg == Leg::kFront) {
    if (phi < config.boundaries[0]) return std::nullopt;
    return (phi - config.boundaries[0]) / (kTwoPi - config.boundaries[0]);
  }
  // Rear stance is [b1, b2); its swing window starts at b2 and wraps to b1.
  if (phi >= config.boundaries[1] && phi < config.boundaries[2]) return std::nullopt;
  const double window = kTwoPi - (config.boundaries[2] - config.boundaries[1]);
  const double elapsed = wrap_phase(phi - config.boundaries[2]);
  return elapsed / window;
}

}  // namespace salto
