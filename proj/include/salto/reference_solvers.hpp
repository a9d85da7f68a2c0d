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

#include "salto/stance_control.hpp"

namespace salto {

// Reference implementations for the verification suites. These deliberately
// share no code with the production solver: projected gradient descent over
// the per-foot feasible triangles, and exhaustive grid search. Slow and
// simple on purpose.

// Euclidean projection onto the truncated friction cone
// {(fx, fz) : 0 <= fz <= f_z_max, |fx| <= mu fz}, a triangle in 2-D.
Vec2 project_to_force_triangle(const Vec2& f, double mu, double f_z_max);

struct PgdResult {
  std::vector<Vec2> forces;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Projected gradient with a 1/L step, run until the successive objective
// change drops below `tol`.
PgdResult solve_grf_projected_gradient(const GrfProblem& problem, double tol = 1e-10,
                                       int max_iterations = 800000);

// Brute-force minimum over a regular grid of the single-foot feasible
// triangle; `resolution` is relative to f_z_max. Only defined for one-contact
// problems.
double grid_search_objective(const GrfProblem& problem, double resolution = 1e-3);

}  // namespace salto
