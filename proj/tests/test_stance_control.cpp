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

#include "salto/checks.hpp"
#include "salto/reference_solvers.hpp"
#include "salto/rng.hpp"
#include "salto/stance_control.hpp"
#include "sim_harness.hpp"

using namespace salto;

TEST_CASE("reference acceleration PD rule") {
  ReferenceGains gains;
  TrunkVelocity vel;

  SUBCASE("zero error") {
    vel.linear = Vec2(1.0, -0.5);
    vel.pitch_rate = 2.0;
    CHECK(reference_acceleration(Vec3(1.0, -0.5, 2.0), vel, gains).norm() == 0.0);
  }
  SUBCASE("proportional response") {
    const Vec3 a = reference_acceleration(Vec3(1.0, 0.0, 0.0), TrunkVelocity{}, gains);
    CHECK((a - Vec3(5.0, 0.0, 0.0)).norm() < 1e-15);
  }
  SUBCASE("clamped to a_max") {
    vel.linear = Vec2(-20.0, 0.0);
    const Vec3 a = reference_acceleration(Vec3(0.0, 0.0, 0.0), vel, gains);
    CHECK(a.x() == doctest::Approx(40.0));
  }
}

TEST_CASE("centroidal model assembly") {
  GrfProblem p;
  p.foot_offsets = {Vec2(0.0, -0.3)};
  Eigen::MatrixXd a_matrix;
  Vec3 g;
  build_centroidal_model(p, a_matrix, g);

  CHECK(a_matrix(0, 0) == doctest::Approx(1.0 / 12.0));
  CHECK(a_matrix(0, 1) == 0.0);
  CHECK(a_matrix(1, 0) == 0.0);
  CHECK(a_matrix(1, 1) == doctest::Approx(1.0 / 12.0));
  CHECK(a_matrix(2, 0) == doctest::Approx(3.0));
  CHECK(a_matrix(2, 1) == doctest::Approx(0.0));
  CHECK((g - Vec3(0.0, -kGravity, 0.0)).norm() == 0.0);

  SUBCASE("zero force gives gravity-only acceleration") {
    const auto sol = solve_grf_qp(p, QpMode::kExact);
    const Vec3 a = a_matrix * Eigen::Vector2d::Zero() + g;
    CHECK((a - g).norm() == 0.0);
    REQUIRE(sol.has_value());
  }
  SUBCASE("symmetric vertical forces cancel the pitch row") {
    GrfProblem two;
    two.foot_offsets = {Vec2(0.19, -0.3), Vec2(-0.19, -0.3)};
    Eigen::MatrixXd a2;
    Vec3 g2;
    build_centroidal_model(two, a2, g2);
    Eigen::VectorXd f(4);
    f << 0.0, 50.0, 0.0, 50.0;
    CHECK(std::abs((a2 * f + g2)[2]) < 1e-12);
  }
}

TEST_CASE("QP handles the documented cases") {
  SUBCASE("no contacts leaves only the gravity error") {
    GrfProblem p;
    const auto sol = solve_grf_qp(p, QpMode::kExact);
    REQUIRE(sol.has_value());
    CHECK(sol->forces.empty());
    CHECK(sol->cost == doctest::Approx(kGravity * kGravity));
  }
  SUBCASE("gravity compensation through a single foot") {
    GrfProblem p;
    p.foot_offsets = {Vec2(0.0, -0.3)};
    p.weights.force_reg = 1e-12;
    const auto sol = solve_grf_qp(p, QpMode::kExact);
    REQUIRE(sol.has_value());
    CHECK(sol->forces[0].x() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(sol->forces[0].y() == doctest::Approx(12.0 * kGravity).epsilon(1e-9));
    CHECK(sol->cost < 1e-6);  // the vanishing regularization term remains
  }
  SUBCASE("cone-active instance matches the projected-gradient oracle") {
    GrfProblem p;
    p.foot_offsets = {Vec2(0.0, -0.3)};
    p.accel_ref = Vec3(20.0, 0.0, 0.0);
    p.weights.accel_tracking = Vec3(1.0, 1.0, 0.0);  // pitch row free
    const auto sol = solve_grf_qp(p, QpMode::kExact);
    REQUIRE(sol.has_value());
    // The x-demand saturates the friction cone.
    CHECK(std::abs(sol->forces[0].x()) ==
          doctest::Approx(p.mu * sol->forces[0].y()).epsilon(1e-9));
    const PgdResult ref = solve_grf_projected_gradient(p, 1e-10);
    CHECK(std::abs(sol->cost - ref.objective) < 1e-6);
    // And beats a fine grid scan.
    CHECK(sol->cost <= grid_search_objective(p, 1e-3) + 1e-9);
  }
}

TEST_CASE("QP optimality certificate on random instances") {
  Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    GrfProblem p;
    p.mu = rng.uniform(0.3, 1.0);
    p.accel_ref = Vec3(rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(-60, 60));
    const int k = 1 + (i % 2);
    for (int j = 0; j < k; ++j) {
      p.foot_offsets.push_back(Vec2(rng.uniform(-0.35, 0.35), rng.uniform(-0.4, -0.15)));
    }
    const auto detail = solve_grf_qp_detailed(p, QpMode::kExact);
    REQUIRE(detail.has_value());
    CHECK(detail->kkt_residual < 1e-8);
    const PgdResult ref = solve_grf_projected_gradient(p, 1e-10);
    CHECK(detail->solution.cost <= ref.objective + 1e-6);
  }
}

TEST_CASE("approx mode clamps the least-squares solution") {
  Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    GrfProblem p;
    p.mu = rng.uniform(0.3, 1.0);
    p.accel_ref = Vec3(rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(-60, 60));
    p.foot_offsets = {Vec2(rng.uniform(-0.3, 0.3), rng.uniform(-0.4, -0.15))};
    if (i % 2 == 1) p.foot_offsets.push_back(Vec2(rng.uniform(-0.3, 0.3), -0.3));

    const auto approx = solve_grf_qp(p, QpMode::kApprox);
    REQUIRE(approx.has_value());
    for (const Vec2& f : approx->forces) {
      CHECK(f.y() >= -1e-12);
      CHECK(f.y() <= p.f_z_max + 1e-12);
      CHECK(std::abs(f.x()) <= p.mu * f.y() + 1e-12);
    }
    // Approx can only be worse than exact, and matches when unconstrained.
    const auto exact = solve_grf_qp(p, QpMode::kExact);
    CHECK(approx->cost >= exact->cost - 1e-9);
  }
}

TEST_CASE("torque mapping") {
  TrunkPose pose;

  SUBCASE("zero force maps to zero torque") {
    CHECK(grf_to_torque(Vec2::Zero(), pose, leg_jacobian(Vec2(0.3, 0.8), LegGeometry{}))
              .norm() == 0.0);
  }
  SUBCASE("vertical force on a straight-down leg has no moment arm") {
    const Mat2 jac = leg_jacobian(Vec2(0.0, 0.0), LegGeometry{});
    CHECK(grf_to_torque(Vec2(0.0, 100.0), pose, jac).norm() < 1e-12);
  }
  SUBCASE("power balance identity") {
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
      pose.pitch = rng.uniform(-1.5, 1.5);
      const Vec2 q(rng.uniform(-kPi, kPi), rng.uniform(0.1, kPi - 0.1));
      const Vec2 qd(rng.uniform(-10, 10), rng.uniform(-10, 10));
      const Vec2 f(rng.uniform(-100, 100), rng.uniform(-100, 100));
      const Mat2 jac = leg_jacobian(q, LegGeometry{});
      const Vec2 tau = grf_to_torque(f, pose, jac);
      const Vec2 f_body = pose.rotation().transpose() * (-f);
      CHECK(std::abs(tau.dot(qd) - f_body.dot(jac * qd)) < 1e-10);
    }
  }
}

TEST_CASE("reference foot velocity inverts the velocity composition") {
  SUBCASE("zero references") {
    TrunkPose pose;
    pose.pitch = 0.4;
    CHECK(reference_foot_velocity(Vec2::Zero(), 0.0, Vec2(0.2, -0.3), pose).norm() == 0.0);
  }
  SUBCASE("level pose counters forward motion") {
    const Vec2 v = reference_foot_velocity(Vec2(1.0, 0.0), 0.0, Vec2(0.2, -0.3), TrunkPose{});
    CHECK((v - Vec2(-1.0, 0.0)).norm() < 1e-15);
  }
  SUBCASE("identity against the forward composition") {
    std::string detail;
    CHECK(check_foot_velocity_inverse_identity(
        [](const Vec2& v_ref, double omega_ref, const Vec2& p_foot, const TrunkPose& pose) {
          return reference_foot_velocity(v_ref, omega_ref, p_foot, pose);
        },
        1000, &detail));
  }
  SUBCASE("a sign bug is caught by the identity checker") {
    // Mutation smoke test: flipping the leading sign must fail the suite.
    std::string detail;
    CHECK(!check_foot_velocity_inverse_identity(
        [](const Vec2& v_ref, double omega_ref, const Vec2& p_foot, const TrunkPose& pose) {
          return -reference_foot_velocity(v_ref, omega_ref, p_foot, pose);
        },
        1000, &detail));
  }
}

TEST_CASE("feedback torque law") {
  FeedbackGains gains;
  const Mat2 jac = leg_jacobian(Vec2(0.3, 1.1), LegGeometry{});

  SUBCASE("matched joint velocity gives zero torque") {
    const Vec2 v_ref(0.2, -0.1);
    const Vec2 qd = jac.inverse() * v_ref;
    CHECK(feedback_torque(v_ref, jac, qd, gains).norm() < 1e-12);
  }
  SUBCASE("zero gain disables feedback") {
    gains.k_d_fb = 0.0;
    CHECK(feedback_torque(Vec2(1.0, 1.0), jac, Vec2(5.0, -5.0), gains).norm() == 0.0);
  }
  SUBCASE("singular jacobian falls back to zero") {
    const Mat2 singular = leg_jacobian(Vec2(0.0, 0.0), LegGeometry{});
    CHECK(std::abs(singular.determinant()) < 1e-12);
    CHECK(feedback_torque(Vec2(1.0, 0.0), singular, Vec2(0.0, 0.0), FeedbackGains{}).norm() ==
          0.0);
  }
}

TEST_CASE("stance torques reproduce gravity compensation at rest") {
  const RobotParams params;
  StanceControlConfig config;
  config.weights.force_reg = 1e-12;  // regularization off for the closed form
  const RobotState s = testing::equilibrium_stand(params);

  const auto cmd = stance_torques(s, {true, true}, Vec3::Zero(), config, params);
  REQUIRE(cmd.has_value());

  const Vec2 f_expected(0.0, 0.5 * params.mass * kGravity);
  for (Leg leg : {Leg::kFront, Leg::kRear}) {
    const Mat2 jac = leg_jacobian(s.leg_q(leg), params.geometry(leg));
    const Vec2 tau_expected = grf_to_torque(f_expected, s.pose, jac);
    // At rest the feedback term vanishes (qd = 0, v_ref = 0).
    CHECK((cmd->torques.segment<2>(2 * leg_index(leg)) - tau_expected).norm() < 1e-6);
  }
  CHECK(cmd->grf.cost < 1e-6);
}

TEST_CASE("feedback strictly improves pitch-rate tracking") {
  const double with_fb = testing::omega_tracking_error(1.0, 31, 2.0, 0.4, 0.5);
  const double without_fb = testing::omega_tracking_error(0.0, 31, 2.0, 0.4, 0.5);
  CHECK(with_fb < without_fb);
}
