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

#include "salto/perception.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>

namespace salto {

std::vector<CameraRay> camera_rays(const TrunkPose& pose, const CameraModel& cam) {
  std::vector<CameraRay> rays;
  rays.reserve(cam.n_rays);
  const Vec2 origin = pose.position + pose.rotation() * cam.mount_offset;
  const double center = pose.pitch + cam.mount_pitch;
  for (int i = 0; i < cam.n_rays; ++i) {
    const double angle =
        center + cam.fov * (static_cast<double>(i) / (cam.n_rays - 1) - 0.5);
    rays.push_back({origin, Vec2(std::cos(angle), std::sin(angle))});
  }
  return rays;
}

double ray_terrain_distance(const Vec2& origin, const Vec2& direction,
                            const TerrainProfile& terrain, double max_range) {
  constexpr double kParallel = 1e-12;
  double best = max_range;
  const auto& bps = terrain.breakpoints;
  const std::size_t n = bps.size();

  for (std::size_t i = 0; i < n; ++i) {
    // Floor segment [x_i, x_{i+1}) at height h_i.
    if (std::abs(direction.y()) > kParallel) {
      const double t = (bps[i].height - origin.y()) / direction.y();
      if (t > 0.0 && t < best) {
        const double x_hit = origin.x() + t * direction.x();
        const double x_end = i + 1 < n ? bps[i + 1].x : std::numeric_limits<double>::infinity();
        if (x_hit >= bps[i].x && x_hit < x_end) best = t;
      }
    }
    // Vertical riser at x_i between the neighboring floor heights.
    if (i > 0 && std::abs(direction.x()) > kParallel) {
      const double t = (bps[i].x - origin.x()) / direction.x();
      if (t > 0.0 && t < best) {
        const double z_hit = origin.y() + t * direction.y();
        const double lo = std::min(bps[i - 1].height, bps[i].height);
        const double hi = std::max(bps[i - 1].height, bps[i].height);
        if (z_hit >= lo && z_hit <= hi) best = t;
      }
    }
  }
  return best;
}

DepthFrame render_depth(const TrunkPose& pose, const TerrainProfile& terrain,
                        const CameraModel& cam, Rng& rng, long step) {
  DepthFrame frame;
  frame.capture_pose = pose;
  frame.capture_step = step;
  frame.depths.reserve(cam.n_rays);
  for (const CameraRay& ray : camera_rays(pose, cam)) {
    double d = ray_terrain_distance(ray.origin, ray.direction, terrain, cam.max_range);
    if (d < cam.max_range && cam.noise_std > 0.0) {
      d = std::clamp(d + rng.gaussian(0.0, cam.noise_std), 1e-6, cam.max_range);
    }
    frame.depths.push_back(d);
  }
  return frame;
}

DepthFrame LatencyBuffer::push_and_fetch(const DepthFrame& frame) {
  frames_.push_back(frame);
  while (static_cast<int>(frames_.size()) > delay_steps_ + 1) frames_.pop_front();
  return frames_.front();
}

long HeightmapMemory::index_of(double x) const {
  return std::lround(x / config_.cell_size);
}

const MemoryCell* HeightmapMemory::cell_at(double x) const {
  const long idx = index_of(x);
  if (idx < first_index_ || idx >= first_index_ + static_cast<long>(cells_.size())) {
    return nullptr;
  }
  return &cells_[idx - first_index_];
}

void HeightmapMemory::clear() {
  cells_.clear();
  first_index_ = 0;
}

void HeightmapMemory::ensure_window(double center_x) {
  const long lo = index_of(center_x - config_.window_behind);
  const long hi = index_of(center_x + config_.window_ahead);
  if (cells_.empty()) {
    first_index_ = lo;
    cells_.assign(hi - lo + 1, MemoryCell{});
    return;
  }
  while (first_index_ > lo) {
    cells_.insert(cells_.begin(), MemoryCell{});
    --first_index_;
  }
  while (first_index_ + static_cast<long>(cells_.size()) <= hi) cells_.push_back(MemoryCell{});
  // Roll the tail forward: drop cells far behind the robot.
  while (first_index_ < lo && !cells_.empty()) {
    cells_.erase(cells_.begin());
    ++first_index_;
  }
}

namespace {

struct Sample {
  double x;
  double z;
};

// A pair of adjacent hits lying on a near-vertical surface marks a riser.
bool steep_pair(const Sample& a, const Sample& b) {
  const double dx = std::abs(b.x - a.x);
  const double dz = std::abs(b.z - a.z);
  return dz > 0.004 && dx < 0.35 * dz;
}

}  // namespace

void HeightmapMemory::integrate_frame(const DepthFrame& frame) {
  ensure_window(frame.capture_pose.position.x());

  for (MemoryCell& cell : cells_) cell.confidence *= config_.confidence_decay;

  // Unproject hit rays with the capture-time pose; the ray count follows the
  // frame, the intrinsics the configured camera.
  CameraModel cam = config_.camera;
  cam.n_rays = static_cast<int>(frame.depths.size());
  const std::vector<CameraRay> rays = camera_rays(frame.capture_pose, cam);
  std::vector<Sample> hits;
  for (int i = 0; i < cam.n_rays; ++i) {
    const double d = frame.depths[i];
    if (d >= cam.max_range - 1e-9) continue;
    const Vec2 p = rays[i].origin + d * rays[i].direction;
    hits.push_back({p.x(), p.y()});
  }
  if (hits.empty()) return;

  // Riser detection: flag samples on near-vertical runs, estimate one edge x
  // per run.
  std::vector<bool> on_riser(hits.size(), false);
  for (std::size_t i = 0; i + 1 < hits.size(); ++i) {
    if (steep_pair(hits[i], hits[i + 1])) {
      on_riser[i] = true;
      on_riser[i + 1] = true;
    }
  }
  std::vector<double> edges;
  for (std::size_t i = 0; i < hits.size();) {
    if (!on_riser[i]) {
      ++i;
      continue;
    }
    std::vector<double> xs;
    while (i < hits.size() && on_riser[i]) xs.push_back(hits[i++].x);
    std::sort(xs.begin(), xs.end());
    edges.push_back(xs[xs.size() / 2]);
  }

  // Bin floor samples per cell. Where a detected edge crosses the cell, only
  // samples on the cell center's side of the edge may represent it; the cell
  // value is the median of the admissible samples.
  std::map<long, std::vector<double>> per_cell;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (on_riser[i]) continue;
    const long idx = index_of(hits[i].x);
    if (idx < first_index_ || idx >= first_index_ + static_cast<long>(cells_.size())) continue;

    const double center = idx * config_.cell_size;
    bool admissible = true;
    for (double e : edges) {
      if (std::abs(e - center) > 0.5 * config_.cell_size) continue;
      // Right-continuous convention: a center at the edge belongs to the
      // right side.
      const bool center_right = center >= e;
      const bool sample_right = hits[i].x >= e;
      if (center_right != sample_right) admissible = false;
    }
    if (admissible) per_cell[idx].push_back(hits[i].z);
  }

  std::vector<long> updated;
  for (auto& [idx, zs] : per_cell) {
    std::sort(zs.begin(), zs.end());
    const double z =
        zs.size() % 2 == 1 ? zs[zs.size() / 2] : 0.5 * (zs[zs.size() / 2 - 1] + zs[zs.size() / 2]);
    MemoryCell& cell = cells_[idx - first_index_];
    cell.height = (cell.confidence * cell.height + z) / (cell.confidence + 1.0);
    cell.confidence = std::min(1.0, cell.confidence + 1.0);
    cell.last_update = frame.capture_step;
    updated.push_back(idx);
  }

  // Confidence boost on riser-adjacent cells seen this frame.
  for (std::size_t a = 0; a + 1 < updated.size(); ++a) {
    if (updated[a + 1] != updated[a] + 1) continue;
    MemoryCell& lo = cells_[updated[a] - first_index_];
    MemoryCell& hi = cells_[updated[a + 1] - first_index_];
    if (std::abs(hi.height - lo.height) > config_.edge_delta) {
      lo.confidence = 1.0;
      hi.confidence = 1.0;
    }
  }
}

Heightmap HeightmapMemory::query(double base_x, const HeightmapConfig& hm_config,
                                 QueryDiagnostics* diag) const {
  Heightmap hm;
  hm.origin_x = base_x + hm_config.x_min;
  hm.cell_size = hm_config.cell_size;
  hm.values.assign(hm_config.cells, 0.0);

  QueryDiagnostics local;
  local.cell_confident.assign(hm_config.cells, false);

  const long n = static_cast<long>(cells_.size());
  const auto confident = [&](long idx) {
    return idx >= first_index_ && idx < first_index_ + n &&
           cells_[idx - first_index_].confidence >= config_.confidence_floor;
  };

  // Estimated ground under the base: the nearest confident cell, searched
  // outward from the base cell.
  const long base_idx = index_of(base_x);
  bool have_ground = false;
  for (long radius = 0; radius <= n && !have_ground; ++radius) {
    for (long idx : {base_idx - radius, base_idx + radius}) {
      if (confident(idx)) {
        local.ground_reference = cells_[idx - first_index_].height;
        have_ground = true;
        break;
      }
    }
  }
  local.low_confidence = !have_ground;

  for (int i = 0; i < hm_config.cells; ++i) {
    const double x = hm.origin_x + i * hm_config.cell_size;
    long idx = index_of(x);
    if (confident(idx)) {
      local.cell_confident[i] = true;
    } else {
      // Occlusion forward-fill: walk back toward the robot.
      long probe = idx - 1;
      while (probe >= first_index_ && !confident(probe)) --probe;
      idx = confident(probe) ? probe : -1;
    }
    if (idx >= 0 && confident(idx)) {
      hm.values[i] = cells_[idx - first_index_].height - local.ground_reference;
    } else {
      hm.values[i] = 0.0;
    }
  }

  if (diag != nullptr) *diag = local;
  return hm;
}

ReconstructionError reconstruction_error(const Heightmap& estimate, const Heightmap& truth,
                                         const std::vector<bool>& confident) {
  if (estimate.values.size() != truth.values.size() ||
      confident.size() != estimate.values.size() ||
      std::abs(estimate.origin_x - truth.origin_x) > 1e-9 ||
      std::abs(estimate.cell_size - truth.cell_size) > 1e-9) {
    throw GeometryMismatch("heightmap geometry mismatch");
  }
  ReconstructionError err;
  err.per_cell.resize(estimate.values.size());
  double sum2 = 0.0, sum2_conf = 0.0;
  std::size_t n_conf = 0;
  for (std::size_t i = 0; i < estimate.values.size(); ++i) {
    const double e = estimate.values[i] - truth.values[i];
    err.per_cell[i] = e;
    sum2 += e * e;
    err.max_abs = std::max(err.max_abs, std::abs(e));
    if (confident[i]) {
      sum2_conf += e * e;
      err.max_abs_confident = std::max(err.max_abs_confident, std::abs(e));
      ++n_conf;
    }
  }
  err.rms = estimate.values.empty() ? 0.0 : std::sqrt(sum2 / estimate.values.size());
  err.rms_confident = n_conf == 0 ? 0.0 : std::sqrt(sum2_conf / n_conf);
  return err;
}

void append_depth_frame(std::ostream& os, const DepthFrame& frame) {
  const std::uint32_t count = static_cast<std::uint32_t>(frame.depths.size());
  os.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (double d : frame.depths) {
    const float f = static_cast<float>(d);
    os.write(reinterpret_cast<const char*>(&f), sizeof(f));
  }
}

}  // namespace salto
