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

#include "salto/geometry.hpp"
#include "salto/rng.hpp"

using namespace salto;

namespace {
const LegGeometry kLeg{0.2, 0.2, 0.0};
}

TEST_CASE("forward kinematics at reference configurations") {
  CHECK((forward_kinematics(Vec2(0.0, 0.0), kLeg) - Vec2(0.0, -0.4)).norm() < 1e-15);
  CHECK((forward_kinematics(Vec2(kPi / 2, 0.0), kLeg) - Vec2(0.4, 0.0)).norm() < 1e-15);
  CHECK((forward_kinematics(Vec2(0.0, kPi / 2), kLeg) - Vec2(0.2, -0.2)).norm() < 1e-15);
}

TEST_CASE("inverse kinematics solves and clamps") {
  SUBCASE("direct inverse of an FK pose") {
    const auto q = inverse_kinematics(Vec2(0.2, -0.2), kLeg);
    REQUIRE(q.has_value());
    CHECK(std::abs((*q)[0] - 0.0) < 1e-12);
    CHECK(std::abs((*q)[1] - kPi / 2) < 1e-12);
  }
  SUBCASE("full extension boundary clamps to reach minus margin") {
    const auto q = inverse_kinematics(Vec2(0.0, -0.4), kLeg);
    REQUIRE(q.has_value());
    CHECK(std::abs((*q)[0]) < 1e-2);
    CHECK(std::abs((*q)[1]) < 1e-2);
    CHECK((*q)[1] >= 0.0);
    // The solved pose sits at the clamped radius.
    CHECK(forward_kinematics(*q, kLeg).norm() == doctest::Approx(0.4 - 1e-6).epsilon(1e-9));
  }
  SUBCASE("beyond reach is an error") {
    CHECK(!inverse_kinematics(Vec2(0.0, -0.5), kLeg).has_value());
  }
  SUBCASE("knee branch is always non-negative") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
      const Vec2 p(rng.uniform(-0.38, 0.38), rng.uniform(-0.38, -0.02));
      const auto q = inverse_kinematics(p, kLeg);
      if (q) CHECK((*q)[1] >= 0.0);
    }
  }
}

TEST_CASE("IK/FK roundtrip oracle") {
  Rng rng(2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 q(rng.uniform(-kPi, kPi), rng.uniform(0.01, kPi - 0.01));
    const auto back = inverse_kinematics(forward_kinematics(q, kLeg), kLeg);
    REQUIRE(back.has_value());
    worst = std::max(worst, std::abs(wrap_angle(q[0] - (*back)[0])));
    worst = std::max(worst, std::abs(q[1] - (*back)[1]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("jacobian closed form and finite differences") {
  Mat2 j0 = leg_jacobian(Vec2(0.0, 0.0), kLeg);
  CHECK(j0(0, 0) == doctest::Approx(0.4));
  CHECK(j0(0, 1) == doctest::Approx(0.2));
  CHECK(j0(1, 0) == doctest::Approx(0.0));
  CHECK(j0(1, 1) == doctest::Approx(0.0));

  Mat2 j1 = leg_jacobian(Vec2(kPi / 2, 0.0), kLeg);
  CHECK(std::abs(j1(0, 0)) < 1e-12);
  CHECK(std::abs(j1(0, 1)) < 1e-12);
  CHECK(j1(1, 0) == doctest::Approx(0.4));
  CHECK(j1(1, 1) == doctest::Approx(0.2));

  // Central finite-difference oracle, h = 1e-6.
  Rng rng(3);
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 q(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    const Mat2 jac = leg_jacobian(q, kLeg);
    Mat2 fd;
    for (int col = 0; col < 2; ++col) {
      Vec2 qp = q, qm = q;
      qp[col] += h;
      qm[col] -= h;
      fd.col(col) = (forward_kinematics(qp, kLeg) - forward_kinematics(qm, kLeg)) / (2.0 * h);
    }
    CHECK((jac - fd).norm() / jac.norm() < 1e-5);
  }
}

TEST_CASE("body to world transform") {
  TrunkPose pose;
  pose.position = Vec2(1.0, 0.3);

  SUBCASE("identity rotation") {
    CHECK((body_to_world(Vec2(0.1, -0.3), pose) - Vec2(1.1, 0.0)).norm() < 1e-15);
  }
  SUBCASE("quarter turn") {
    pose.pitch = kPi / 2;
    CHECK((body_to_world(Vec2(0.1, -0.3), pose) - Vec2(1.3, 0.4)).norm() < 1e-12);
  }
  SUBCASE("origin maps to trunk position") {
    pose.pitch = -0.77;
    CHECK((body_to_world(Vec2::Zero(), pose) - pose.position).norm() == 0.0);
  }
}

TEST_CASE("world foot velocity composition") {
  TrunkPose pose;
  TrunkVelocity vel;

  SUBCASE("all static") {
    CHECK(world_foot_velocity(Vec2::Zero(), Vec2(0.2, -0.3), pose, vel).norm() == 0.0);
  }
  SUBCASE("body and foot motion cancel") {
    vel.linear = Vec2(1.0, 0.0);
    CHECK(world_foot_velocity(Vec2(-1.0, 0.0), Vec2(0.1, -0.2), pose, vel).norm() < 1e-15);
  }
  SUBCASE("pure rotation cross product") {
    vel.pitch_rate = 1.0;
    const Vec2 v = world_foot_velocity(Vec2::Zero(), Vec2(0.2, -0.3), pose, vel);
    CHECK((v - Vec2(0.3, 0.2)).norm() < 1e-15);
  }
}

TEST_CASE("transform/velocity consistency along a smooth trajectory") {
  // Differentiating the transformed position numerically must match the
  // velocity composition to O(dt).
  const double dt = 1e-5;
  const auto pose_at = [](double t) {
    TrunkPose pose;
    pose.position = Vec2(0.8 * t, 0.3 + 0.1 * std::sin(t));
    pose.pitch = 0.4 * std::sin(2.0 * t);
    return pose;
  };
  const auto foot_at = [](double t) { return Vec2(0.1 * std::sin(3.0 * t), -0.3); };
  for (double t : {0.0, 0.4, 1.1, 2.2}) {
    TrunkVelocity vel;
    vel.linear = (pose_at(t + dt).position - pose_at(t - dt).position) / (2 * dt);
    vel.pitch_rate = (pose_at(t + dt).pitch - pose_at(t - dt).pitch) / (2 * dt);
    const Vec2 v_body = (foot_at(t + dt) - foot_at(t - dt)) / (2 * dt);
    const Vec2 numeric = (body_to_world(foot_at(t + dt), pose_at(t + dt)) -
                          body_to_world(foot_at(t - dt), pose_at(t - dt))) /
                         (2 * dt);
    const Vec2 analytic = world_foot_velocity(v_body, foot_at(t), pose_at(t), vel);
    CHECK((numeric - analytic).norm() / std::max(1.0, analytic.norm()) < 1e-3);
  }
}
