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
#include <vector>

#include <Eigen/Dense>

#include "salto/sim.hpp"
#include "salto/types.hpp"

namespace salto {

// Acceleration components are ordered (a_x, a_z, alpha).
struct ControlWeights {
  Vec3 accel_tracking = Vec3(1.0, 1.0, 10.0);  // U diagonal
  double force_reg = 1e-4;                     // V diagonal (per force component)
};

struct ReferenceGains {
  Vec3 k_v = Vec3(5.0, 5.0, 5.0);        // [1/s]
  Vec3 a_max = Vec3(40.0, 40.0, 80.0);   // clamp on the reference acceleration
};

struct FeedbackGains {
  double k_d_fb = 1.0;     // joint-velocity feedback gain [N*m*s/rad]
  double det_min = 1e-4;   // Jacobian determinant floor [m^2/rad^2]
};

enum class QpMode { kExact, kApprox };

struct GrfProblem {
  Vec3 accel_ref = Vec3::Zero();
  std::vector<Vec2> foot_offsets;  // contact feet, world frame, relative to CoM
  double mu = 0.6;
  double f_z_max = 250.0;  // per foot [N]
  ControlWeights weights;
  double mass = 12.0;
  double inertia = 0.1;
};

// Forces are ground-on-robot, world frame, one per contact foot in problem
// order.
struct GrfSolution {
  std::vector<Vec2> forces;
  Vec3 accel_achieved = Vec3::Zero();
  double cost = 0.0;
};

// Solver certificate for diagnostics and the optimality checks: multipliers
// for the 4-per-foot inequality rows (-f_z <= 0, f_z <= f_z_max,
// f_x - mu f_z <= 0, -f_x - mu f_z <= 0) and the worst KKT residual.
struct GrfSolveDetail {
  GrfSolution solution;
  Eigen::VectorXd duals;
  double kkt_residual = 0.0;
};

Vec3 reference_acceleration(const Vec3& v_ref, const TrunkVelocity& vel,
                            const ReferenceGains& gains);

// Linear map a = A*f + g of the planar centroidal dynamics for the problem's
// contact feet.
void build_centroidal_model(const GrfProblem& problem, Eigen::MatrixXd& a_matrix, Vec3& g);

// Exact mode enumerates the per-foot active sets of the friction-cone /
// force-box constraints and returns the KKT-certified minimizer; approx mode
// clamps the unconstrained weighted least-squares solution onto the
// constraints componentwise. nullopt signals solver failure (callers fall
// back to their previous solution).
std::optional<GrfSolution> solve_grf_qp(const GrfProblem& problem, QpMode mode);
std::optional<GrfSolveDetail> solve_grf_qp_detailed(const GrfProblem& problem, QpMode mode);

double grf_objective(const GrfProblem& problem, const std::vector<Vec2>& forces);

// tau = J^T * f_body where f_body is the body-frame force the foot applies to
// the ground; f_world is the ground-on-robot force from the QP.
Vec2 grf_to_torque(const Vec2& f_world, const TrunkPose& pose, const Mat2& jacobian);

// Body-frame foot velocity that holds the foot still in the world while the
// trunk moves at the reference velocities.
Vec2 reference_foot_velocity(const Vec2& v_ref, double omega_ref, const Vec2& p_foot_body,
                             const TrunkPose& pose);

// tau_fb = k_d_fb * (J^{-1} v_ref - qd); returns zero (feedforward-only
// fallback) when |det J| <= det_min.
Vec2 feedback_torque(const Vec2& v_foot_body_ref, const Mat2& jacobian, const Vec2& qd,
                     const FeedbackGains& gains);

struct StanceControlConfig {
  ControlWeights weights;
  ReferenceGains reference;
  FeedbackGains feedback;
  double mu = 0.6;        // effective cone the QP plans with
  double mu_scale = 1.0;  // margin below the simulated friction coefficient
  double f_z_max = 250.0;
  QpMode mode = QpMode::kExact;
};

struct StanceCommand {
  Vec4 torques = Vec4::Zero();  // swing-leg entries stay zero
  GrfSolution grf;
};

// Feedforward GRF torques plus joint-velocity feedback for every stance leg.
// v_ref = (v_x, v_z, omega). nullopt propagates solver failure.
std::optional<StanceCommand> stance_torques(const RobotState& state,
                                            const std::array<bool, kNumLegs>& stance,
                                            const Vec3& v_ref,
                                            const StanceControlConfig& config,
                                            const RobotParams& params);

}  // namespace salto
