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

#ifndef SKYFRAME_MAPPING_SIGNED_DISTANCE_FIELD_H_
#define SKYFRAME_MAPPING_SIGNED_DISTANCE_FIELD_H_

#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "skyframe/mapping/occupancy_grid.h"

namespace skyframe {
namespace mapping {

// Incrementally maintained truncated distance from every voxel center to the
// nearest obstacle border voxel center.
//
// Each voxel stores the squared lattice distance to its nearest border voxel
// and that voxel's index. Border insertions start a lower wave that pushes
// nearest-border indices to the 26 neighbors in order of increasing distance;
// border removals first clear every voxel that referenced the removed voxel
// (a raise) and then re-lower the cleared region from its intact neighbors.
// Distances at or beyond the truncation radius are not stored.
//
// The field holds magnitudes only. The sign comes from the occupancy grid at
// query time (see DistanceView).
class SignedDistanceField {
 public:
  static constexpr std::int32_t kFar = std::numeric_limits<std::int32_t>::max();

  SignedDistanceField(const GridGeometry& geometry, double truncation);

  const GridGeometry& geometry() const { return geometry_; }
  double truncation() const { return truncation_; }
  std::uint64_t version() const { return version_; }

  // Applies border-set deltas. An empty ChangeSet leaves the field untouched.
  void Update(const ChangeSet& changes);

  // Clears everything and inserts the grid's current border set.
  void Rebuild(const OccupancyGrid& grid);

  // Truncated Euclidean distance in meters, in [0, truncation].
  double Magnitude(int linear) const;
  std::int32_t SquaredLatticeDistance(int linear) const { return sq_[linear]; }
  // Nearest border voxel, or -1 when none lies within the truncation radius.
  int NearestBorder(int linear) const { return nearest_[linear]; }
  bool is_border(int linear) const { return border_[linear] != 0; }

 private:
  using Entry = std::pair<std::int32_t, int>;
  using MinQueue =
      std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>>;

  bool WithinTruncation(std::int32_t sq) const {
    return static_cast<double>(sq) < truncation_sq_;
  }
  std::int32_t SquaredDistance(int a, int b) const;
  void ClearReferencesTo(int removed, std::vector<int>* cleared);
  void Propagate();

  GridGeometry geometry_;
  double truncation_;
  double truncation_sq_;  // in lattice units
  int radius_;            // truncation in whole voxels, rounded up
  std::vector<std::int32_t> sq_;
  std::vector<int> nearest_;
  std::vector<std::uint8_t> border_;
  MinQueue queue_;
  std::uint64_t version_ = 0;
};

struct DistanceSample {
  double distance = 0.0;
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
};

// Signed distance queries over a grid and its distance field.
//
// The magnitude is trilinearly interpolated between voxel centers. The sign
// is that of the voxel containing the query point: positive when free,
// negative when unknown or occupied. Points outside the grid read as far
// free space, +truncation with zero gradient.
class DistanceView {
 public:
  DistanceView(const OccupancyGrid& grid, const SignedDistanceField& field);

  double truncation() const { return field_->truncation(); }
  const OccupancyGrid& grid() const { return *grid_; }
  const SignedDistanceField& field() const { return *field_; }

  double Distance(const WorldPoint& p) const;

  // Distance and the exact gradient of the interpolant inside the voxel
  // containing p.
  DistanceSample DistanceAndGradient(const WorldPoint& p) const;

  // Central differences of Distance() with a step of one voxel.
  Eigen::Vector3d CentralGradient(const WorldPoint& p) const;

 private:
  const OccupancyGrid* grid_;
  const SignedDistanceField* field_;
};

// True iff no voxel visited by the DDA traversal from a to b is occupied.
bool LineOfSight(const OccupancyGrid& grid, const WorldPoint& a,
                 const WorldPoint& b);

}  // namespace mapping
}  // namespace skyframe

#endif  // SKYFRAME_MAPPING_SIGNED_DISTANCE_FIELD_H_
