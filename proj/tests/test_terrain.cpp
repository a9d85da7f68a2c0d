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

#include <cstring>

#include "salto/rng.hpp"
#include "salto/terrain.hpp"

using namespace salto;

TEST_CASE("terrain generation is deterministic and level-checked") {
  const TerrainSpec spec{TerrainKind::kSingleGap, 0, 7};
  const TerrainProfile a = generate_terrain(spec);
  const TerrainProfile b = generate_terrain(spec);
  REQUIRE(a.breakpoints.size() == b.breakpoints.size());
  for (std::size_t i = 0; i < a.breakpoints.size(); ++i) {
    CHECK(a.breakpoints[i].x == b.breakpoints[i].x);
    CHECK(a.breakpoints[i].height == b.breakpoints[i].height);
  }
  CHECK_THROWS_AS(generate_terrain({TerrainKind::kStairs, 99, 0}), InvalidLevel);
  CHECK_THROWS_AS(generate_terrain({TerrainKind::kStairs, -1, 0}), InvalidLevel);
}

TEST_CASE("max-level feature sizes hit the headline dimensions") {
  SUBCASE("0.6 m step at max level") {
    const TerrainProfile step = generate_terrain({TerrainKind::kSingleStep, kMaxTerrainLevel, 3});
    double largest_jump = 0.0;
    for (std::size_t i = 1; i < step.breakpoints.size(); ++i) {
      largest_jump = std::max(largest_jump, std::abs(step.breakpoints[i].height -
                                                     step.breakpoints[i - 1].height));
    }
    CHECK(largest_jump == doctest::Approx(0.6));
  }
  SUBCASE("0.8 m gap at max level") {
    const TerrainProfile gap = generate_terrain({TerrainKind::kSingleGap, kMaxTerrainLevel, 3});
    double width = 0.0;
    for (std::size_t i = 0; i + 1 < gap.breakpoints.size(); ++i) {
      if (gap.breakpoints[i].height < -0.5) {
        width = gap.breakpoints[i + 1].x - gap.breakpoints[i].x;
      }
    }
    CHECK(width == doctest::Approx(0.8));
    CHECK(gap.breakpoints[1].height == doctest::Approx(-1.0));  // gaps are 1 m deep pits
  }
  SUBCASE("stairs hold 14 steps at every level") {
    for (int level : {0, 4, kMaxTerrainLevel}) {
      const TerrainProfile stairs = generate_terrain({TerrainKind::kStairs, level, 1});
      CHECK(stairs.breakpoints.size() == 15);  // sentinel + 14 risers
    }
  }
}

TEST_CASE("height lookup is right-continuous piecewise-constant") {
  CHECK(height_at(TerrainProfile::flat(), -100.0) == 0.0);
  CHECK(height_at(TerrainProfile::flat(), 3.7) == 0.0);

  TerrainProfile step;
  step.breakpoints = {{kSpawnSentinelX, 0.0}, {1.0, 0.3}};
  CHECK(height_at(step, 0.999999) == 0.0);
  CHECK(height_at(step, 1.0) == 0.3);  // right-continuous at the breakpoint
  CHECK(height_at(step, 2.0) == 0.3);
  CHECK(height_at(step, -5.0) == 0.0);  // spawn region
}

TEST_CASE("heightmap sampling") {
  HeightmapConfig cfg;

  SUBCASE("flat terrain gives zeros at any base") {
    for (double base : {0.0, 1.31, -2.0}) {
      const Heightmap hm = sample_heightmap(TerrainProfile::flat(), base, cfg);
      CHECK(hm.values.size() == 32);
      for (double v : hm.values) CHECK(v == 0.0);
    }
  }
  SUBCASE("step appears from the containing cell onward") {
    TerrainProfile step;
    const double base = 0.4;
    step.breakpoints = {{kSpawnSentinelX, 0.0}, {base + 0.5, 0.3}};
    const Heightmap hm = sample_heightmap(step, base, cfg);
    for (int i = 0; i < 32; ++i) {
      const double x = hm.origin_x + i * hm.cell_size;
      CHECK(hm.values[i] == (x >= base + 0.5 ? 0.3 : 0.0));
    }
  }
  SUBCASE("values invariant to a global height offset") {
    TerrainProfile a = generate_terrain({TerrainKind::kStairs, 5, 2});
    TerrainProfile b = a;
    for (Breakpoint& bp : b.breakpoints) bp.height += 17.3;
    const Heightmap ha = sample_heightmap(a, 0.9, cfg);
    const Heightmap hb = sample_heightmap(b, 0.9, cfg);
    for (std::size_t i = 0; i < ha.values.size(); ++i) {
      CHECK(ha.values[i] == doctest::Approx(hb.values[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("heightmap randomization") {
  HeightmapConfig cfg;
  const Heightmap hm = sample_heightmap(generate_terrain({TerrainKind::kStairs, 6, 2}), 0.8, cfg);

  SUBCASE("zero ranges are the identity") {
    HeightmapConfig zero = cfg;
    zero.shift_range = 0.0;
    zero.lift_range = 0.0;
    Rng rng(4);
    const Heightmap out = randomize_heightmap(hm, zero, rng);
    for (std::size_t i = 0; i < hm.values.size(); ++i) CHECK(out.values[i] == hm.values[i]);
  }
  SUBCASE("draws stay inside the configured envelopes") {
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
      HeightmapShift drawn;
      randomize_heightmap(hm, cfg, rng, &drawn);
      CHECK(std::abs(drawn.horizontal) <= 0.08);
      CHECK(std::abs(drawn.vertical) <= 0.05);
    }
  }
  SUBCASE("a constant map shifts only vertically") {
    Heightmap flat = hm;
    std::fill(flat.values.begin(), flat.values.end(), 0.25);
    Rng rng(6);
    HeightmapShift drawn;
    const Heightmap out = randomize_heightmap(flat, cfg, rng, &drawn);
    for (double v : out.values) {
      CHECK(v == doctest::Approx(0.25 + drawn.vertical).epsilon(1e-12));
    }
    CHECK(std::abs(drawn.vertical) <= 0.05);
  }
}

TEST_CASE("curriculum promotion") {
  CurriculumConfig cfg;
  const double extent = 6.0;

  SUBCASE("20 full-extent episodes promote one level") {
    CurriculumState s;
    for (int i = 0; i < 19; ++i) {
      s = update_curriculum(s, extent, extent, cfg);
      CHECK(s.level == 0);
    }
    s = update_curriculum(s, extent, extent, cfg);
    CHECK(s.level == 1);
  }
  SUBCASE("failed episodes never promote") {
    CurriculumState s;
    for (int i = 0; i < 100; ++i) s = update_curriculum(s, 0.0, extent, cfg);
    CHECK(s.level == 0);
  }
  SUBCASE("saturates at max level and never demotes") {
    CurriculumState s;
    s.level = cfg.max_level;
    for (int i = 0; i < 50; ++i) s = update_curriculum(s, extent, extent, cfg);
    CHECK(s.level == cfg.max_level);
    for (int i = 0; i < 50; ++i) s = update_curriculum(s, 0.0, extent, cfg);
    CHECK(s.level == cfg.max_level);
  }
}

TEST_CASE("terrain JSON round trip is exact") {
  const TerrainSpec spec{TerrainKind::kSteppingStones, 7, 12345};
  const TerrainProfile profile = generate_terrain(spec);
  const std::string text = terrain_to_json(spec, profile);

  TerrainSpec spec2;
  TerrainProfile profile2;
  terrain_from_json(text, spec2, profile2);
  CHECK(spec2.kind == spec.kind);
  CHECK(spec2.level == spec.level);
  CHECK(spec2.seed == spec.seed);
  CHECK(profile2.extent == profile.extent);
  REQUIRE(profile2.breakpoints.size() == profile.breakpoints.size());
  for (std::size_t i = 0; i < profile.breakpoints.size(); ++i) {
    CHECK(profile2.breakpoints[i].x == profile.breakpoints[i].x);
    CHECK(profile2.breakpoints[i].height == profile.breakpoints[i].height);
  }
  // Second serialization is byte-identical.
  CHECK(terrain_to_json(spec2, profile2) == text);
}
