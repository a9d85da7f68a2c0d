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

#include "salto/reference_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace salto {
namespace {

Vec2 project_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return a + t * ab;
}

bool inside_triangle(const Vec2& p, double mu, double f_z_max) {
  return p.y() >= 0.0 && p.y() <= f_z_max && std::abs(p.x()) <= mu * p.y();
}

}  // namespace

Vec2 project_to_force_triangle(const Vec2& f, double mu, double f_z_max) {
  if (inside_triangle(f, mu, f_z_max)) return f;
  const Vec2 apex(0.0, 0.0);
  const Vec2 right(mu * f_z_max, f_z_max);
  const Vec2 left(-mu * f_z_max, f_z_max);

  Vec2 best = apex;
  double best_d2 = (f - apex).squaredNorm();
  for (const Vec2& candidate : {project_to_segment(f, apex, right),
                                project_to_segment(f, apex, left),
                                project_to_segment(f, left, right)}) {
    const double d2 = (f - candidate).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = candidate;
    }
  }
  return best;
}

PgdResult solve_grf_projected_gradient(const GrfProblem& problem, double tol,
                                       int max_iterations) {
  const int k = static_cast<int>(problem.foot_offsets.size());
  PgdResult result;
  result.forces.assign(k, Vec2::Zero());
  if (k == 0) {
    result.objective = grf_objective(problem, result.forces);
    result.converged = true;
    return result;
  }

  Eigen::MatrixXd a_matrix;
  Vec3 g;
  build_centroidal_model(problem, a_matrix, g);
  const Eigen::MatrixXd u = problem.weights.accel_tracking.asDiagonal();
  const Eigen::MatrixXd hess =
      2.0 * (a_matrix.transpose() * u * a_matrix +
             problem.weights.force_reg * Eigen::MatrixXd::Identity(2 * k, 2 * k));
  const Eigen::VectorXd lin = 2.0 * a_matrix.transpose() * (u * (g - problem.accel_ref));

  // Momentum with the known strong-convexity constant; the force
  // regularization keeps the problem strictly convex but badly conditioned,
  // so plain fixed-step iterations would stall above the requested accuracy.
  const Eigen::VectorXd eigenvalues = hess.selfadjointView<Eigen::Lower>().eigenvalues();
  const double lipschitz = eigenvalues.maxCoeff();
  const double strong = std::max(eigenvalues.minCoeff(), 2.0 * problem.weights.force_reg);
  const double step = 1.0 / lipschitz;
  const double beta = (std::sqrt(lipschitz) - std::sqrt(strong)) /
                      (std::sqrt(lipschitz) + std::sqrt(strong));

  const auto project = [&](Eigen::VectorXd v) {
    for (int j = 0; j < k; ++j) {
      v.segment<2>(2 * j) =
          project_to_force_triangle(v.segment<2>(2 * j), problem.mu, problem.f_z_max);
    }
    return v;
  };
  const auto objective = [&](const Eigen::VectorXd& v) {
    return 0.5 * v.dot(hess * v) + lin.dot(v);
  };

  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * k);
  Eigen::VectorXd f_prev = f;
  double prev_obj = objective(f);
  int quiet = 0;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd y = f + beta * (f - f_prev);
    Eigen::VectorXd next = project(y - step * (hess * y + lin));
    f_prev = f;
    f = next;
    const double obj = objective(f);
    if (obj > prev_obj) f_prev = f;  // restart momentum on an objective rise
    result.iterations = it + 1;
    // Converged when both the iterate and the projected-gradient step are
    // still at the requested absolute tolerance for a stretch.
    const double moved = (f - f_prev).lpNorm<Eigen::Infinity>();
    const double mapping =
        (f - project(f - step * (hess * f + lin))).lpNorm<Eigen::Infinity>();
    quiet = (std::abs(prev_obj - obj) < tol && moved < 1e-11 && mapping < 1e-11) ? quiet + 1 : 0;
    prev_obj = obj;
    if (quiet >= 80) {
      result.converged = true;
      break;
    }
  }

  for (int j = 0; j < k; ++j) result.forces[j] = f.segment<2>(2 * j);
  result.objective = grf_objective(problem, result.forces);
  return result;
}

double grid_search_objective(const GrfProblem& problem, double resolution) {
  if (problem.foot_offsets.size() != 1) {
    throw std::invalid_argument("grid search reference handles one contact only");
  }
  const double dz = resolution * problem.f_z_max;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vec2> f(1);
  for (double fz = 0.0; fz <= problem.f_z_max + 1e-12; fz += dz) {
    const double fx_max = problem.mu * fz;
    for (double fx = -fx_max; fx <= fx_max + 1e-12; fx += dz) {
      f[0] = Vec2(std::min(fx, fx_max), std::min(fz, problem.f_z_max));
      best = std::min(best, grf_objective(problem, f));
    }
  }
  return best;
}

}  // namespace salto
