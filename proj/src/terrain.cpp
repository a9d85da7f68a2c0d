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

#include "salto/terrain.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace salto {
namespace {

constexpr double kPitDepth = 1.0;

// Difficulty schedule, linear in level over [0, kMaxTerrainLevel].
double lerp_level(double easy, double hard, int level) {
  return easy + (hard - easy) * static_cast<double>(level) / kMaxTerrainLevel;
}

struct Builder {
  TerrainProfile profile;
  void add(double x, double h) { profile.breakpoints.push_back({x, h}); }
};

}  // namespace

std::string to_string(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::kSingleGap: return "single_gap";
    case TerrainKind::kSingleStep: return "single_step";
    case TerrainKind::kStairs: return "stairs";
    case TerrainKind::kSteppingStones: return "stepping_stones";
  }
  return "single_gap";
}

TerrainKind terrain_kind_from_string(const std::string& name) {
  if (name == "single_gap") return TerrainKind::kSingleGap;
  if (name == "single_step") return TerrainKind::kSingleStep;
  if (name == "stairs") return TerrainKind::kStairs;
  if (name == "stepping_stones") return TerrainKind::kSteppingStones;
  throw std::runtime_error("unknown terrain kind: " + name);
}

TerrainProfile TerrainProfile::flat(double extent) {
  TerrainProfile p;
  p.breakpoints = {{kSpawnSentinelX, 0.0}};
  p.extent = extent;
  return p;
}

TerrainProfile generate_terrain(const TerrainSpec& spec) {
  if (spec.level < 0 || spec.level > kMaxTerrainLevel) {
    throw InvalidLevel("terrain level " + std::to_string(spec.level) + " outside [0, " +
                       std::to_string(kMaxTerrainLevel) + "]");
  }
  Rng rng(spec.seed ^ (0x51a7b0d1ull * (static_cast<std::uint64_t>(spec.level) + 1)));

  Builder b;
  b.add(kSpawnSentinelX, 0.0);

  switch (spec.kind) {
    case TerrainKind::kSingleGap: {
      const double width = lerp_level(0.1, 0.8, spec.level);
      const double start = 1.5 + 0.5 * rng.uniform01();
      b.add(start, -kPitDepth);
      b.add(start + width, 0.0);
      b.profile.extent = 6.0;
      break;
    }
    case TerrainKind::kSingleStep: {
      const double height = lerp_level(0.1, 0.6, spec.level);
      const double start = 1.5 + 0.5 * rng.uniform01();
      b.add(start, height);
      b.profile.extent = 6.0;
      break;
    }
    case TerrainKind::kStairs: {
      // Fixed 0.25 m run (two treads per nominal jump length); the flight of
      // stairs spans 3.5 m, i.e. extent-over-run = 14 steps.
      const double rise = lerp_level(0.08, 0.20, spec.level);
      const double run = 0.25;
      const double start = 1.0;
      const double span = 3.5;
      const int n_steps = static_cast<int>(std::floor(span / run + 1e-9));
      for (int i = 0; i < n_steps; ++i) {
        b.add(start + i * run, rise * (i + 1));
      }
      b.profile.extent = 6.0;
      break;
    }
    case TerrainKind::kSteppingStones: {
      const double stone = lerp_level(0.8, 0.25, spec.level);
      const double gap = lerp_level(0.1, 0.5, spec.level);
      double x = 1.5 + 0.3 * rng.uniform01();
      const double landing = 8.0 - 1.5;  // final flat region starts here at the latest
      while (x + gap + stone < landing) {
        b.add(x, -kPitDepth);
        b.add(x + gap, 0.0);
        x += gap + stone;
      }
      b.profile.extent = 8.0;
      break;
    }
  }
  return b.profile;
}

double height_at(const TerrainProfile& terrain, double x) {
  // Last breakpoint with start <= x; right-continuous at edges.
  const auto it = std::upper_bound(
      terrain.breakpoints.begin(), terrain.breakpoints.end(), x,
      [](double value, const Breakpoint& bp) { return value < bp.x; });
  if (it == terrain.breakpoints.begin()) return 0.0;
  return std::prev(it)->height;
}

Heightmap sample_heightmap(const TerrainProfile& terrain, double base_x,
                           const HeightmapConfig& config) {
  Heightmap hm;
  hm.origin_x = base_x + config.x_min;
  hm.cell_size = config.cell_size;
  hm.values.resize(config.cells);
  const double base_height = height_at(terrain, base_x);
  for (int i = 0; i < config.cells; ++i) {
    hm.values[i] = height_at(terrain, hm.origin_x + i * config.cell_size) - base_height;
  }
  return hm;
}

Heightmap randomize_heightmap(const Heightmap& hm, const HeightmapConfig& config, Rng& rng,
                              HeightmapShift* drawn) {
  const double u = rng.uniform(-config.shift_range, config.shift_range);
  const double w = rng.uniform(-config.lift_range, config.lift_range);
  if (drawn != nullptr) *drawn = {u, w};

  // The observed map is the true map translated forward by u: the value seen
  // at cell i comes from the source cell nearest x_i - u.
  const int shift_cells = static_cast<int>(std::lround(u / hm.cell_size));
  const int n = static_cast<int>(hm.values.size());

  Heightmap out = hm;
  for (int i = 0; i < n; ++i) {
    const int src = std::clamp(i - shift_cells, 0, n - 1);
    out.values[i] = hm.values[src] + w;
  }
  return out;
}

CurriculumState update_curriculum(const CurriculumState& state, double episode_distance,
                                  double terrain_extent, const CurriculumConfig& config) {
  CurriculumState next = state;
  next.recent_distances.push_back(episode_distance);
  while (static_cast<int>(next.recent_distances.size()) > config.window) {
    next.recent_distances.pop_front();
  }
  if (next.level >= config.max_level ||
      static_cast<int>(next.recent_distances.size()) < config.window) {
    return next;
  }
  std::vector<double> sorted(next.recent_distances.begin(), next.recent_distances.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double median =
      sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  if (median >= config.promote_fraction * terrain_extent) {
    next.level += 1;
    next.recent_distances.clear();  // each level earns promotion on fresh episodes
  }
  return next;
}

std::string terrain_to_json(const TerrainSpec& spec, const TerrainProfile& profile) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  j["level"] = spec.level;
  j["seed"] = spec.seed;
  j["breakpoints"] = nlohmann::json::array();
  for (const Breakpoint& bp : profile.breakpoints) {
    j["breakpoints"].push_back({bp.x, bp.height});
  }
  j["extent"] = profile.extent;
  return j.dump(2) + "\n";
}

void terrain_from_json(const std::string& text, TerrainSpec& spec, TerrainProfile& profile) {
  const nlohmann::json j = nlohmann::json::parse(text);
  spec.kind = terrain_kind_from_string(j.at("kind").get<std::string>());
  spec.level = j.at("level").get<int>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  profile.breakpoints.clear();
  for (const auto& bp : j.at("breakpoints")) {
    profile.breakpoints.push_back({bp.at(0).get<double>(), bp.at(1).get<double>()});
  }
  profile.extent = j.at("extent").get<double>();
}

}  // namespace salto
