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

#include "salto/stance_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace salto {

Vec3 reference_acceleration(const Vec3& v_ref, const TrunkVelocity& vel,
                            const ReferenceGains& gains) {
  const Vec3 actual(vel.linear.x(), vel.linear.y(), vel.pitch_rate);
  Vec3 a = gains.k_v.cwiseProduct(v_ref - actual);
  return a.cwiseMax(-gains.a_max).cwiseMin(gains.a_max);
}

void build_centroidal_model(const GrfProblem& problem, Eigen::MatrixXd& a_matrix, Vec3& g) {
  const int k = static_cast<int>(problem.foot_offsets.size());
  a_matrix.setZero(3, 2 * k);
  for (int j = 0; j < k; ++j) {
    const Vec2& r = problem.foot_offsets[j];
    a_matrix(0, 2 * j) = 1.0 / problem.mass;
    a_matrix(1, 2 * j + 1) = 1.0 / problem.mass;
    a_matrix(2, 2 * j) = -r.y() / problem.inertia;
    a_matrix(2, 2 * j + 1) = r.x() / problem.inertia;
  }
  g = Vec3(0.0, -kGravity, 0.0);
}

double grf_objective(const GrfProblem& problem, const std::vector<Vec2>& forces) {
  Eigen::MatrixXd a_matrix;
  Vec3 g;
  build_centroidal_model(problem, a_matrix, g);
  Eigen::VectorXd f(2 * forces.size());
  for (std::size_t j = 0; j < forces.size(); ++j) f.segment<2>(2 * j) = forces[j];
  const Vec3 err = a_matrix * f + g - problem.accel_ref;
  return err.dot(problem.weights.accel_tracking.cwiseProduct(err)) +
         problem.weights.force_reg * f.squaredNorm();
}

namespace {

// Inequality rows, 4 per foot: -f_z <= 0, f_z <= f_z_max, f_x - mu f_z <= 0,
// -f_x - mu f_z <= 0.
void constraint_rows(const GrfProblem& problem, Eigen::MatrixXd& g_mat, Eigen::VectorXd& h) {
  const int k = static_cast<int>(problem.foot_offsets.size());
  g_mat.setZero(4 * k, 2 * k);
  h.setZero(4 * k);
  for (int j = 0; j < k; ++j) {
    g_mat(4 * j + 0, 2 * j + 1) = -1.0;
    g_mat(4 * j + 1, 2 * j + 1) = 1.0;
    h(4 * j + 1) = problem.f_z_max;
    g_mat(4 * j + 2, 2 * j) = 1.0;
    g_mat(4 * j + 2, 2 * j + 1) = -problem.mu;
    g_mat(4 * j + 3, 2 * j) = -1.0;
    g_mat(4 * j + 3, 2 * j + 1) = -problem.mu;
  }
}

// Per-foot active-set modes; indices into the foot's 4 constraint rows. The
// origin needs both cone rows to pin f = 0, and their span also certifies any
// multiplier the f_z >= 0 row could contribute.
const std::vector<std::vector<int>>& foot_modes() {
  static const std::vector<std::vector<int>> modes = {
      {}, {2}, {3}, {1}, {1, 2}, {1, 3}, {2, 3},
  };
  return modes;
}

struct Candidate {
  Eigen::VectorXd f;
  Eigen::VectorXd duals;  // full-length, zeros on inactive rows
  double objective = std::numeric_limits<double>::infinity();
  double kkt = std::numeric_limits<double>::infinity();
  bool ok = false;
};

double kkt_residual(const Eigen::MatrixXd& hess, const Eigen::VectorXd& lin,
                    const Eigen::MatrixXd& g_mat, const Eigen::VectorXd& h,
                    const Eigen::VectorXd& f, const Eigen::VectorXd& duals) {
  const Eigen::VectorXd stationarity = hess * f + lin + g_mat.transpose() * duals;
  const Eigen::VectorXd slack = g_mat * f - h;
  double res = stationarity.lpNorm<Eigen::Infinity>();
  res = std::max(res, slack.maxCoeff());                                  // primal feasibility
  res = std::max(res, -duals.minCoeff());                                 // dual feasibility
  res = std::max(res, duals.cwiseProduct(slack).lpNorm<Eigen::Infinity>());  // complementarity
  return res;
}

std::optional<GrfSolveDetail> solve_exact(const GrfProblem& problem,
                                          const Eigen::MatrixXd& a_matrix, const Vec3& g) {
  const int k = static_cast<int>(problem.foot_offsets.size());
  const int n = 2 * k;

  const Eigen::MatrixXd u = problem.weights.accel_tracking.asDiagonal();
  const Eigen::MatrixXd hess =
      2.0 * (a_matrix.transpose() * u * a_matrix +
             problem.weights.force_reg * Eigen::MatrixXd::Identity(n, n));
  const Eigen::VectorXd lin = 2.0 * a_matrix.transpose() * (u * (g - problem.accel_ref));

  Eigen::MatrixXd g_mat;
  Eigen::VectorXd h;
  constraint_rows(problem, g_mat, h);

  const auto& modes = foot_modes();
  const int n_modes = static_cast<int>(modes.size());
  int combos = 1;
  for (int j = 0; j < k; ++j) combos *= n_modes;

  constexpr double kFeasTol = 1e-9;
  Candidate best;

  for (int combo = 0; combo < combos; ++combo) {
    // Gather the active rows of this mode tuple.
    std::vector<int> active;
    int rem = combo;
    for (int j = 0; j < k; ++j) {
      for (int row : modes[rem % n_modes]) active.push_back(4 * j + row);
      rem /= n_modes;
    }
    const int m = static_cast<int>(active.size());

    Eigen::MatrixXd kkt_mat(n + m, n + m);
    kkt_mat.setZero();
    kkt_mat.topLeftCorner(n, n) = hess;
    Eigen::VectorXd rhs(n + m);
    rhs.head(n) = -lin;
    for (int a = 0; a < m; ++a) {
      kkt_mat.block(n + a, 0, 1, n) = g_mat.row(active[a]);
      kkt_mat.block(0, n + a, n, 1) = g_mat.row(active[a]).transpose();
      rhs(n + a) = h(active[a]);
    }

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt_mat);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);

    Eigen::VectorXd duals = Eigen::VectorXd::Zero(4 * k);
    for (int a = 0; a < m; ++a) duals(active[a]) = sol(n + a);
    const Eigen::VectorXd f = sol.head(n);

    if (((g_mat * f - h).array() > kFeasTol).any()) continue;
    if ((duals.array() < -kFeasTol).any()) continue;

    const Vec3 err = a_matrix * f + g - problem.accel_ref;
    const double obj = err.dot(problem.weights.accel_tracking.cwiseProduct(err)) +
                       problem.weights.force_reg * f.squaredNorm();
    if (obj < best.objective) {
      best = {f, duals, obj, kkt_residual(hess, lin, g_mat, h, f, duals), true};
    }
  }

  if (!best.ok) return std::nullopt;

  GrfSolveDetail detail;
  detail.solution.forces.resize(k);
  for (int j = 0; j < k; ++j) detail.solution.forces[j] = best.f.segment<2>(2 * j);
  detail.solution.accel_achieved = a_matrix * best.f + g;
  detail.solution.cost = best.objective;
  detail.duals = best.duals;
  detail.kkt_residual = best.kkt;
  return detail;
}

GrfSolveDetail solve_approx(const GrfProblem& problem, const Eigen::MatrixXd& a_matrix,
                            const Vec3& g) {
  const int k = static_cast<int>(problem.foot_offsets.size());
  const int n = 2 * k;

  const Eigen::MatrixXd u = problem.weights.accel_tracking.asDiagonal();
  const Eigen::MatrixXd hess =
      a_matrix.transpose() * u * a_matrix +
      problem.weights.force_reg * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd lin = a_matrix.transpose() * (u * (g - problem.accel_ref));
  Eigen::VectorXd f = hess.ldlt().solve(-lin);

  // Componentwise projection: box on f_z first, then the cone on f_x.
  for (int j = 0; j < k; ++j) {
    double& fx = f(2 * j);
    double& fz = f(2 * j + 1);
    fz = std::clamp(fz, 0.0, problem.f_z_max);
    fx = std::clamp(fx, -problem.mu * fz, problem.mu * fz);
  }

  GrfSolveDetail detail;
  detail.solution.forces.resize(k);
  for (int j = 0; j < k; ++j) detail.solution.forces[j] = f.segment<2>(2 * j);
  detail.solution.accel_achieved = a_matrix * f + g;
  detail.solution.cost = grf_objective(problem, detail.solution.forces);
  detail.duals = Eigen::VectorXd::Zero(4 * k);
  detail.kkt_residual = std::numeric_limits<double>::quiet_NaN();  // not a KKT point
  return detail;
}

}  // namespace

std::optional<GrfSolveDetail> solve_grf_qp_detailed(const GrfProblem& problem, QpMode mode) {
  const int k = static_cast<int>(problem.foot_offsets.size());
  if (k == 0) {
    GrfSolveDetail detail;
    const Vec3 err = Vec3(0.0, -kGravity, 0.0) - problem.accel_ref;
    detail.solution.accel_achieved = Vec3(0.0, -kGravity, 0.0);
    detail.solution.cost = err.dot(problem.weights.accel_tracking.cwiseProduct(err));
    detail.kkt_residual = 0.0;
    return detail;
  }

  Eigen::MatrixXd a_matrix;
  Vec3 g;
  build_centroidal_model(problem, a_matrix, g);
  if (mode == QpMode::kApprox) return solve_approx(problem, a_matrix, g);
  return solve_exact(problem, a_matrix, g);
}

std::optional<GrfSolution> solve_grf_qp(const GrfProblem& problem, QpMode mode) {
  auto detail = solve_grf_qp_detailed(problem, mode);
  if (!detail) return std::nullopt;
  return detail->solution;
}

Vec2 grf_to_torque(const Vec2& f_world, const TrunkPose& pose, const Mat2& jacobian) {
  const Vec2 f_body = pose.rotation().transpose() * (-f_world);
  return jacobian.transpose() * f_body;
}

Vec2 reference_foot_velocity(const Vec2& v_ref, double omega_ref, const Vec2& p_foot_body,
                             const TrunkPose& pose) {
  const Mat2 rot = pose.rotation();
  const Vec2 p_rot = rot * p_foot_body;
  return -(rot.transpose() * (v_ref + cross_z(omega_ref, p_rot)));
}

Vec2 feedback_torque(const Vec2& v_foot_body_ref, const Mat2& jacobian, const Vec2& qd,
                     const FeedbackGains& gains) {
  const double det = jacobian.determinant();
  if (std::abs(det) <= gains.det_min) return Vec2::Zero();
  Mat2 inv;
  inv << jacobian(1, 1), -jacobian(0, 1), -jacobian(1, 0), jacobian(0, 0);
  inv /= det;
  return gains.k_d_fb * (inv * v_foot_body_ref - qd);
}

std::optional<StanceCommand> stance_torques(const RobotState& state,
                                            const std::array<bool, kNumLegs>& stance,
                                            const Vec3& v_ref,
                                            const StanceControlConfig& config,
                                            const RobotParams& params) {
  GrfProblem problem;
  problem.mu = config.mu;
  problem.f_z_max = config.f_z_max;
  problem.weights = config.weights;
  problem.mass = params.mass;
  problem.inertia = params.inertia;

  TrunkVelocity vel = state.vel;
  problem.accel_ref = reference_acceleration(v_ref, vel, config.reference);

  std::vector<Leg> stance_legs;
  for (Leg leg : {Leg::kFront, Leg::kRear}) {
    if (!stance[leg_index(leg)]) continue;
    stance_legs.push_back(leg);
    problem.foot_offsets.push_back(foot_state(state, leg, params).position_world -
                                   state.pose.position);
  }

  auto solution = solve_grf_qp(problem, config.mode);
  if (!solution) return std::nullopt;

  StanceCommand cmd;
  cmd.grf = *solution;
  for (std::size_t j = 0; j < stance_legs.size(); ++j) {
    const Leg leg = stance_legs[j];
    const Mat2 jac = leg_jacobian(state.leg_q(leg), params.geometry(leg));
    Vec2 tau = grf_to_torque(solution->forces[j], state.pose, jac);
    const FootState fs = foot_state(state, leg, params);
    const Vec2 v_foot_ref = reference_foot_velocity(Vec2(v_ref.x(), v_ref.y()), v_ref.z(),
                                                    fs.position_body, state.pose);
    tau += feedback_torque(v_foot_ref, jac, state.leg_qd(leg), config.feedback);
    cmd.torques.segment<2>(2 * leg_index(leg)) = tau;
  }
  return cmd;
}

}  // namespace salto
