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

#include <deque>
#include <stdexcept>
#include <vector>

#include "salto/geometry.hpp"
#include "salto/rng.hpp"
#include "salto/terrain.hpp"
#include "salto/types.hpp"

namespace salto {

// Sagittal-plane depth camera rigidly mounted on the trunk.
struct CameraModel {
  Vec2 mount_offset = Vec2(0.25, 0.05);  // body frame [m]
  double mount_pitch = -0.4;              // relative to body, tilted down [rad]
  double fov = 1.0;                       // [rad]
  int n_rays = 64;
  double max_range = 4.0;                 // [m]
  double noise_std = 0.01;                // depth noise [m]
};

struct DepthFrame {
  std::vector<double> depths;  // max_range where no hit
  TrunkPose capture_pose;
  long capture_step = 0;
};

struct CameraRay {
  Vec2 origin;
  Vec2 direction;  // unit
};

// Ray fan for a given trunk pose, in render order.
std::vector<CameraRay> camera_rays(const TrunkPose& pose, const CameraModel& cam);

// Exact distance to the first floor segment or vertical riser of the terrain,
// clamped to max_range.
double ray_terrain_distance(const Vec2& origin, const Vec2& direction,
                            const TerrainProfile& terrain, double max_range);

DepthFrame render_depth(const TrunkPose& pose, const TerrainProfile& terrain,
                        const CameraModel& cam, Rng& rng, long step);

// FIFO that delivers frames delay_steps after capture; during warm-up it
// returns the oldest frame it has.
class LatencyBuffer {
 public:
  explicit LatencyBuffer(int delay_steps = 5) : delay_steps_(delay_steps) {}

  DepthFrame push_and_fetch(const DepthFrame& frame);
  void clear() { frames_.clear(); }
  int delay_steps() const { return delay_steps_; }

 private:
  int delay_steps_;
  std::deque<DepthFrame> frames_;
};

struct PerceptionConfig {
  CameraModel camera;
  int delay_steps = 5;
  double cell_size = 0.05;          // matches the heightmap grid
  double confidence_decay = 0.98;   // per integrated frame
  double confidence_floor = 0.1;    // below this a cell counts as unobserved
  double edge_delta = 0.05;         // |dh| between neighbor cells marking an edge
  double window_behind = 2.0;       // memory kept behind the robot [m]
  double window_ahead = 5.0;        // and ahead [m]
};

struct MemoryCell {
  double height = 0.0;
  double confidence = 0.0;
  long last_update = -1;
};

struct QueryDiagnostics {
  bool low_confidence = false;      // no confident cell anywhere in the window
  double ground_reference = 0.0;    // estimated world height under the base
  std::vector<bool> cell_confident;
};

// World-frame rolling grid of height estimates built from delayed depth
// frames; the geometric stand-in for a learned heightmap predictor, with the
// same query interface.
class HeightmapMemory {
 public:
  explicit HeightmapMemory(const PerceptionConfig& config) : config_(config) {}

  void clear();

  // Unprojects the frame's hits with its capture-time pose, detects riser
  // edges, and folds floor samples into the grid by confidence-weighted
  // averaging.
  void integrate_frame(const DepthFrame& frame);

  // Samples the standard heightmap window; unconfident cells are filled from
  // the nearest confident cell toward the robot, heights are relative to the
  // estimated ground under the base.
  Heightmap query(double base_x, const HeightmapConfig& hm_config,
                  QueryDiagnostics* diag = nullptr) const;

  const MemoryCell* cell_at(double x) const;
  double cell_size() const { return config_.cell_size; }

 private:
  long index_of(double x) const;
  void ensure_window(double center_x);

  PerceptionConfig config_;
  long first_index_ = 0;
  std::vector<MemoryCell> cells_;
};

struct GeometryMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReconstructionError {
  double rms = 0.0;
  double max_abs = 0.0;
  double rms_confident = 0.0;
  double max_abs_confident = 0.0;
  std::vector<double> per_cell;
};

ReconstructionError reconstruction_error(const Heightmap& estimate, const Heightmap& truth,
                                         const std::vector<bool>& confident);

// Binary depth dump for offline inspection: per frame a little-endian
// uint32 ray count followed by that many float32 depths.
void append_depth_frame(std::ostream& os, const DepthFrame& frame);

}  // namespace salto
