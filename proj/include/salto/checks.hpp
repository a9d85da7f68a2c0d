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

#include <functional>
#include <string>
#include <vector>

#include "salto/geometry.hpp"
#include "salto/types.hpp"

namespace salto {

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs every property suite whose module or name contains `subset`
// (everything when empty).
std::vector<CheckResult> run_property_checks(const std::string& subset = "");

std::string checks_to_json(const std::vector<CheckResult>& results);

// The static-foot velocity identity checker with an injectable
// implementation, so a deliberately broken variant can prove the check bites.
using FootVelocityFn =
    std::function<Vec2(const Vec2& v_ref, double omega_ref, const Vec2& p_foot_body,
                       const TrunkPose& pose)>;
bool check_foot_velocity_inverse_identity(const FootVelocityFn& fn, int samples,
                                          std::string* detail);

}  // namespace salto
