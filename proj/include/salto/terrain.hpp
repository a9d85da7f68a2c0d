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

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "salto/rng.hpp"
#include "salto/types.hpp"

namespace salto {

enum class TerrainKind { kSingleGap, kSingleStep, kStairs, kSteppingStones };

std::string to_string(TerrainKind kind);
TerrainKind terrain_kind_from_string(const std::string& name);

struct TerrainSpec {
  TerrainKind kind = TerrainKind::kSingleGap;
  int level = 0;  // 0 (easiest) .. kMaxTerrainLevel
  std::uint64_t seed = 0;
};

inline constexpr int kMaxTerrainLevel = 9;

struct InvalidLevel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Piecewise-constant 1-D heightfield. Height left of the first real feature
// is the flat spawn region; the leading breakpoint sits at a far-negative
// sentinel x so lookup never falls off the front.
struct Breakpoint {
  double x = 0.0;       // segment start [m]
  double height = 0.0;  // segment height [m]
};

inline constexpr double kSpawnSentinelX = -1.0e9;

struct TerrainProfile {
  std::vector<Breakpoint> breakpoints;  // strictly increasing x, first at sentinel
  double extent = 6.0;                  // total usable length [m]

  static TerrainProfile flat(double extent = 6.0);
};

// Deterministic in (kind, level, seed). Throws InvalidLevel outside
// [0, kMaxTerrainLevel].
TerrainProfile generate_terrain(const TerrainSpec& spec);

// Right-continuous piecewise-constant lookup.
double height_at(const TerrainProfile& terrain, double x);

// Fixed-length strip of terrain heights ahead of the robot, the
// perception <-> planning interface. Heights are relative to the ground
// under the base.
struct Heightmap {
  std::vector<double> values;
  double origin_x = 0.0;   // world x of the first cell [m]
  double cell_size = 0.05;
};

struct HeightmapConfig {
  int cells = 32;
  double cell_size = 0.05;
  double x_min = -0.2;        // first cell relative to base [m]
  double shift_range = 0.08;  // horizontal randomization half-width [m]
  double lift_range = 0.05;   // vertical randomization half-width [m]
};

Heightmap sample_heightmap(const TerrainProfile& terrain, double base_x,
                           const HeightmapConfig& config);

struct HeightmapShift {
  double horizontal = 0.0;
  double vertical = 0.0;
};

// One horizontal shift (nearest-cell resample, edges clamped) and one vertical
// offset per call, both uniform over the configured ranges. `drawn`, when
// non-null, receives the sampled amounts.
Heightmap randomize_heightmap(const Heightmap& hm, const HeightmapConfig& config, Rng& rng,
                              HeightmapShift* drawn = nullptr);

struct CurriculumConfig {
  int window = 20;                // episodes per promotion decision
  double promote_fraction = 0.8;  // of terrain extent
  int max_level = kMaxTerrainLevel;
};

struct CurriculumState {
  int level = 0;
  std::deque<double> recent_distances;
};

// Promotes one level when the median of the last `window` episode distances
// reaches promote_fraction * extent. Never demotes; saturates at max_level.
CurriculumState update_curriculum(const CurriculumState& state, double episode_distance,
                                  double terrain_extent, const CurriculumConfig& config);

// Terrain file I/O, round-trip stable.
std::string terrain_to_json(const TerrainSpec& spec, const TerrainProfile& profile);
void terrain_from_json(const std::string& text, TerrainSpec& spec, TerrainProfile& profile);

}  // namespace salto
