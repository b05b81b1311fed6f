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

#ifndef SKYFRAME_MAPPING_OCCUPANCY_GRID_H_
#define SKYFRAME_MAPPING_OCCUPANCY_GRID_H_

#include <cstdint>
#include <span>
#include <vector>

#include "skyframe/mapping/grid_geometry.h"

namespace skyframe {
namespace mapping {

inline constexpr std::uint8_t kUnknownValue = 127;

struct OccupancyParams {
  int hit_increment = 40;        // l_occ
  int miss_decrement = 10;       // l_free
  int free_threshold = 107;      // free iff value <= this
  int occupied_threshold = 147;  // occupied iff value >= this

  void Validate() const;
};

enum class VoxelClass : std::uint8_t { kFree, kUnknown, kOccupied };

// Border-set deltas produced by one grid update. `became_occ` lists voxels
// that entered the obstacle border set, `became_free` those that left it.
struct ChangeSet {
  std::vector<int> became_occ;
  std::vector<int> became_free;

  bool empty() const { return became_occ.empty() && became_free.empty(); }
  void Append(const ChangeSet& other);
};

// One LiDAR return. Misses are reported at maximum range.
struct RayReturn {
  WorldPoint point = WorldPoint::Zero();
  bool is_hit = true;
};

// 8-bit occupancy beliefs plus the obstacle border set derived from them.
//
// A voxel is a border voxel when it is occupied, or when it is unknown and
// one of its six face neighbors is free. Border membership is kept in sync
// with the cell values on every update and the changes are reported as a
// ChangeSet for the distance field.
class OccupancyGrid {
 public:
  OccupancyGrid(const GridGeometry& geometry, const OccupancyParams& params);

  const GridGeometry& geometry() const { return geometry_; }
  const OccupancyParams& params() const { return params_; }
  int num_voxels() const { return geometry_.num_voxels(); }

  std::uint8_t value(int linear) const { return cells_[linear]; }
  VoxelClass Classify(int linear) const { return ClassOf(cells_[linear]); }
  VoxelClass ClassOf(int value) const;
  bool IsFree(int linear) const {
    return Classify(linear) == VoxelClass::kFree;
  }
  bool IsOccupied(int linear) const {
    return Classify(linear) == VoxelClass::kOccupied;
  }
  bool is_border(int linear) const { return border_[linear] != 0; }

  // Classification of the voxel containing p; points outside the grid read
  // as free.
  VoxelClass ClassifyPoint(const WorldPoint& p) const;

  // Ray update: every voxel from the sensor voxel up to, but excluding, the
  // endpoint voxel loses `miss_decrement`; the endpoint voxel gains
  // `hit_increment` when the return is a hit. Values saturate at [0, 255].
  // Rays are clipped to the grid; a hit whose endpoint lies outside the grid
  // is treated as a miss.
  ChangeSet InsertRay(const WorldPoint& sensor, const WorldPoint& point,
                      bool is_hit);

  // Same as InsertRay for a batch sharing one sensor origin, with one border
  // reconciliation at the end.
  ChangeSet InsertScan(const WorldPoint& sensor,
                       std::span<const RayReturn> returns);

  // Direct write used to build synthetic worlds. Call SyncBorders() after a
  // batch of writes to refresh the border set.
  void SetValue(int linear, std::uint8_t value);
  void Fill(std::uint8_t value);

  // Recomputes border membership for every voxel and reports the delta.
  ChangeSet SyncBorders();

  // From-scratch border set, sorted. Used as a test oracle.
  std::vector<int> ComputeBorderSet() const;
  std::vector<int> BorderSet() const;

  bool ComputeIsBorder(int linear) const;

 private:
  // Applies the per-ray value changes and records voxels whose class moved.
  void ApplyRay(const WorldPoint& sensor, const WorldPoint& point, bool is_hit);
  void NoteClassChange(int linear);
  ChangeSet ReconcileTouched();

  GridGeometry geometry_;
  OccupancyParams params_;
  std::vector<std::uint8_t> cells_;
  std::vector<std::uint8_t> border_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 1;
  std::vector<int> touched_;
  std::vector<VoxelIndex> ray_scratch_;
};

}  // namespace mapping
}  // namespace skyframe

#endif  // SKYFRAME_MAPPING_OCCUPANCY_GRID_H_
