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

#include "salto/types.hpp"

namespace salto {

// Bounding cycle: front stance, flight, rear stance, flight, in phase order.
// boundaries are the three interior mode splits of [0, 2*pi).
struct GaitConfig {
  std::array<double, 3> boundaries = {0.5 * kPi, kPi, 1.5 * kPi};
  double f_min = 0.5;  // [Hz]
  double f_max = 3.5;  // [Hz]
};

struct GaitState {
  double phase = 0.0;      // [rad), in [0, 2*pi)
  double frequency = 2.0;  // [Hz], last clamped command
};

struct ContactSchedule {
  bool front = false;
  bool rear = false;
};

// phi' = (phi + 2*pi*f*dt) mod 2*pi with f clamped to [f_min, f_max].
GaitState advance_phase(const GaitState& state, double f_cmd, double dt,
                        const GaitConfig& config);

ContactSchedule scheduled_contacts(const GaitState& state, const GaitConfig& config);

// Fraction of the leg's swing window elapsed. A leg swings whenever it is not
// in stance, so the window spans the other three modes. nullopt while the leg
// is in stance.
std::optional<double> swing_progress(const GaitState& state, Leg leg, const GaitConfig& config);

// Stance duration of one quarter-phase mode at frequency f; the
// value the foothold heuristic assumes.
inline double stance_duration(double f) { return 1.0 / (4.0 * f); }

}  // namespace salto
