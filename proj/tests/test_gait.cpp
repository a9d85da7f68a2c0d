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

#include <doctest.h>

#include "salto/gait.hpp"

using namespace salto;

TEST_CASE("phase advance clamps frequency and wraps") {
  const GaitConfig cfg;

  GaitState s;
  s.phase = 6.0;
  s = advance_phase(s, 2.0, 0.01, cfg);
  CHECK(s.phase == doctest::Approx(6.0 + kTwoPi * 0.02).epsilon(1e-12));

  s.phase = 6.2;
  s = advance_phase(s, 2.0, 0.01, cfg);
  CHECK(s.phase == doctest::Approx(6.2 + kTwoPi * 0.02 - kTwoPi).epsilon(1e-9));

  s.phase = 0.0;
  s = advance_phase(s, 0.0, 0.01, cfg);  // below f_min, clamps to 0.5 Hz
  CHECK(s.frequency == doctest::Approx(0.5));
  CHECK(s.phase == doctest::Approx(kTwoPi * 0.5 * 0.01));
}

TEST_CASE("contact schedule over the default quarters") {
  const GaitConfig cfg;
  const auto at = [&](double phi) {
    GaitState s;
    s.phase = phi;
    return scheduled_contacts(s, cfg);
  };
  CHECK(at(0.1).front);
  CHECK(!at(0.1).rear);
  CHECK(!at(2.0).front);
  CHECK(!at(2.0).rear);
  CHECK(!at(3.5).front);
  CHECK(at(3.5).rear);
  CHECK(!at(5.5).front);
  CHECK(!at(5.5).rear);
}

TEST_CASE("swing progress endpoints and stance rejection") {
  const GaitConfig cfg;
  const auto at = [&](double phi, Leg leg) {
    GaitState s;
    s.phase = phi;
    return swing_progress(s, leg, cfg);
  };

  CHECK(!at(0.1, Leg::kFront).has_value());
  REQUIRE(at(kPi / 2, Leg::kFront).has_value());
  CHECK(*at(kPi / 2, Leg::kFront) == doctest::Approx(0.0));
  CHECK(*at(kTwoPi - 1e-9, Leg::kFront) == doctest::Approx(1.0).epsilon(1e-6));

  CHECK(!at(1.2 * kPi, Leg::kRear).has_value());
  CHECK(*at(1.5 * kPi, Leg::kRear) == doctest::Approx(0.0));
  CHECK(*at(kPi - 1e-9, Leg::kRear) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("one cycle walks the four modes in order") {
  const GaitConfig cfg;
  GaitState s;
  const double f = 2.0, dt = 1e-4;
  const auto mode = [&](const GaitState& g) {
    const ContactSchedule c = scheduled_contacts(g, cfg);
    if (c.front) return 0;
    if (c.rear) return 2;
    return g.phase < cfg.boundaries[1] ? 1 : 3;
  };
  std::vector<int> seen{mode(s)};
  const int steps = static_cast<int>(1.0 / (f * dt));
  for (int i = 0; i < steps; ++i) {
    s = advance_phase(s, f, dt, cfg);
    if (mode(s) != seen.back()) seen.push_back(mode(s));
    const ContactSchedule c = scheduled_contacts(s, cfg);
    CHECK(!(c.front && c.rear));  // bounding, not trotting
  }
  CHECK(seen == std::vector<int>{0, 1, 2, 3, 0});
}

TEST_CASE("stance duration follows the quarter-phase convention") {
  CHECK(stance_duration(2.0) == doctest::Approx(0.125));
  CHECK(stance_duration(0.5) == doctest::Approx(0.5));
}
