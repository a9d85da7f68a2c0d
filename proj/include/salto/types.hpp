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

#include <Eigen/Core>

namespace salto {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kGravity = 9.81;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Sagittal plane only: x forward, z up, pitch positive nose-up.
enum class Leg { kFront = 0, kRear = 1 };
inline constexpr int kNumLegs = 2;

inline int leg_index(Leg leg) { return static_cast<int>(leg); }

// In-plane cross products. cross_z is (w ẑ) × v for a vector living in the
// x-z plane, cross2 is the scalar (a × b)·ŷ-equivalent moment term.
inline Vec2 cross_z(double w, const Vec2& v) { return Vec2(-w * v.y(), w * v.x()); }
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline double wrap_angle(double a) {
  // Wraps to (-pi, pi].
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

inline double wrap_phase(double phi) {
  // Wraps to [0, 2*pi).
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  return phi;
}

}  // namespace salto
