/*
 * Copyright 2026 The Skyframe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "skyframe/mapping/occupancy_grid.h"

#include <algorithm>
#include <array>

namespace skyframe {
namespace mapping {
namespace {

constexpr std::array<std::array<int, 3>, 6> kFaceNeighbors = {{
    {{1, 0, 0}},
    {{-1, 0, 0}},
    {{0, 1, 0}},
    {{0, -1, 0}},
    {{0, 0, 1}},
    {{0, 0, -1}},
}};

std::uint8_t Saturate(int value) {
  return static_cast<std::uint8_t>(std::clamp(value, 0, 255));
}

}  // namespace

void OccupancyParams::Validate() const {
  if (hit_increment < 0 || miss_decrement < 0) {
    throw InvalidArgument("OccupancyParams: increments must be nonnegative");
  }
  if (!(0 <= free_threshold && free_threshold < kUnknownValue &&
        kUnknownValue < occupied_threshold && occupied_threshold <= 255)) {
    throw InvalidArgument(
        "OccupancyParams: need 0 <= t_free < 127 < t_occ <= 255");
  }
}

void ChangeSet::Append(const ChangeSet& other) {
  became_occ.insert(became_occ.end(), other.became_occ.begin(),
                    other.became_occ.end());
  became_free.insert(became_free.end(), other.became_free.begin(),
                     other.became_free.end());
}

OccupancyGrid::OccupancyGrid(const GridGeometry& geometry,
                             const OccupancyParams& params)
    : geometry_(geometry),
      params_(params),
      cells_(geometry.num_voxels(), kUnknownValue),
      border_(geometry.num_voxels(), 0),
      stamp_(geometry.num_voxels(), 0) {
  params_.Validate();
}

VoxelClass OccupancyGrid::ClassOf(int value) const {
  if (value <= params_.free_threshold) return VoxelClass::kFree;
  if (value >= params_.occupied_threshold) return VoxelClass::kOccupied;
  return VoxelClass::kUnknown;
}

VoxelClass OccupancyGrid::ClassifyPoint(const WorldPoint& p) const {
  const VoxelIndex v = geometry_.IndexOf(p);
  if (!geometry_.InBounds(v)) return VoxelClass::kFree;
  return Classify(geometry_.Linear(v));
}

bool OccupancyGrid::ComputeIsBorder(int linear) const {
  const VoxelClass cls = Classify(linear);
  if (cls == VoxelClass::kOccupied) return true;
  if (cls == VoxelClass::kFree) return false;
  const VoxelIndex v = geometry_.FromLinear(linear);
  for (const auto& offset : kFaceNeighbors) {
    const VoxelIndex n = v + VoxelIndex(offset[0], offset[1], offset[2]);
    if (geometry_.InBounds(n) && IsFree(geometry_.Linear(n))) return true;
  }
  return false;
}

void OccupancyGrid::NoteClassChange(int linear) {
  if (stamp_[linear] == epoch_) return;
  stamp_[linear] = epoch_;
  touched_.push_back(linear);
}

void OccupancyGrid::ApplyRay(const WorldPoint& sensor, const WorldPoint& point,
                             bool is_hit) {
  if ((point - sensor).norm() == 0.0) return;
  ray_scratch_.clear();
  TraverseSegment(geometry_, sensor, point, [&](const VoxelIndex& v) {
    ray_scratch_.push_back(v);
    return true;
  });
  if (ray_scratch_.empty()) return;

  const VoxelIndex end_voxel = geometry_.IndexOf(point);
  const bool reaches_endpoint =
      geometry_.InBounds(end_voxel) && ray_scratch_.back() == end_voxel;
  const std::size_t free_count =
      reaches_endpoint ? ray_scratch_.size() - 1 : ray_scratch_.size();

  for (std::size_t i = 0; i < free_count; ++i) {
    const int linear = geometry_.Linear(ray_scratch_[i]);
    const VoxelClass before = Classify(linear);
    cells_[linear] = Saturate(cells_[linear] - params_.miss_decrement);
    if (Classify(linear) != before) NoteClassChange(linear);
  }
  if (reaches_endpoint && is_hit) {
    const int linear = geometry_.Linear(end_voxel);
    const VoxelClass before = Classify(linear);
    cells_[linear] = Saturate(cells_[linear] + params_.hit_increment);
    if (Classify(linear) != before) NoteClassChange(linear);
  }
}

ChangeSet OccupancyGrid::ReconcileTouched() {
  // A class change can only alter border membership of the voxel itself and
  // of its face neighbors.
  ChangeSet changes;
  std::vector<int> candidates;
  candidates.reserve(touched_.size() * 7);
  ++epoch_;
  auto add = [&](int linear) {
    if (stamp_[linear] == epoch_) return;
    stamp_[linear] = epoch_;
    candidates.push_back(linear);
  };
  for (const int linear : touched_) {
    add(linear);
    const VoxelIndex v = geometry_.FromLinear(linear);
    for (const auto& offset : kFaceNeighbors) {
      const VoxelIndex n = v + VoxelIndex(offset[0], offset[1], offset[2]);
      if (geometry_.InBounds(n)) add(geometry_.Linear(n));
    }
  }
  for (const int linear : candidates) {
    const bool now = ComputeIsBorder(linear);
    if (now == is_border(linear)) continue;
    border_[linear] = now ? 1 : 0;
    (now ? changes.became_occ : changes.became_free).push_back(linear);
  }
  touched_.clear();
  ++epoch_;
  return changes;
}

ChangeSet OccupancyGrid::InsertRay(const WorldPoint& sensor,
                                   const WorldPoint& point, bool is_hit) {
  ApplyRay(sensor, point, is_hit);
  return ReconcileTouched();
}

ChangeSet OccupancyGrid::InsertScan(const WorldPoint& sensor,
                                    std::span<const RayReturn> returns) {
  for (const RayReturn& r : returns) ApplyRay(sensor, r.point, r.is_hit);
  return ReconcileTouched();
}

void OccupancyGrid::SetValue(int linear, std::uint8_t value) {
  cells_[linear] = value;
}

void OccupancyGrid::Fill(std::uint8_t value) {
  std::fill(cells_.begin(), cells_.end(), value);
}

ChangeSet OccupancyGrid::SyncBorders() {
  ChangeSet changes;
  for (int linear = 0; linear < num_voxels(); ++linear) {
    const bool now = ComputeIsBorder(linear);
    if (now == is_border(linear)) continue;
    border_[linear] = now ? 1 : 0;
    (now ? changes.became_occ : changes.became_free).push_back(linear);
  }
  return changes;
}

std::vector<int> OccupancyGrid::ComputeBorderSet() const {
  std::vector<int> out;
  for (int linear = 0; linear < num_voxels(); ++linear) {
    if (ComputeIsBorder(linear)) out.push_back(linear);
  }
  return out;
}

std::vector<int> OccupancyGrid::BorderSet() const {
  std::vector<int> out;
  for (int linear = 0; linear < num_voxels(); ++linear) {
    if (is_border(linear)) out.push_back(linear);
  }
  return out;
}

}  // namespace mapping
}  // namespace skyframe
