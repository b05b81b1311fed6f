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

#ifndef SKYFRAME_MAPPING_GRID_GEOMETRY_H_
#define SKYFRAME_MAPPING_GRID_GEOMETRY_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "Eigen/Core"
#include "skyframe/core/types.h"

namespace skyframe {
namespace mapping {

using VoxelIndex = Eigen::Vector3i;

// Axis-aligned voxel lattice. Voxel (i, j, k) covers
// [origin + (i, j, k) * voxel_size, origin + (i + 1, j + 1, k + 1) *
// voxel_size).
struct GridGeometry {
  GridGeometry() = default;
  GridGeometry(const WorldPoint& origin_in, double voxel_size_in,
               const VoxelIndex& dims_in)
      : origin(origin_in), voxel_size(voxel_size_in), dims(dims_in) {
    if (!(voxel_size > 0.0) || (dims.array() <= 0).any()) {
      throw InvalidArgument("GridGeometry: bad voxel size or dimensions");
    }
  }

  int num_voxels() const { return dims.x() * dims.y() * dims.z(); }

  bool InBounds(const VoxelIndex& v) const {
    return (v.array() >= 0).all() && (v.array() < dims.array()).all();
  }

  bool Contains(const WorldPoint& p) const {
    const Eigen::Vector3d rel = (p - origin) / voxel_size;
    return (rel.array() >= 0.0).all() &&
           (rel.array() < dims.cast<double>().array()).all();
  }

  // Unclamped index of the voxel containing p.
  VoxelIndex IndexOf(const WorldPoint& p) const {
    const Eigen::Vector3d rel = (p - origin) / voxel_size;
    return VoxelIndex(static_cast<int>(std::floor(rel.x())),
                      static_cast<int>(std::floor(rel.y())),
                      static_cast<int>(std::floor(rel.z())));
  }

  int Linear(const VoxelIndex& v) const {
    return (v.z() * dims.y() + v.y()) * dims.x() + v.x();
  }

  VoxelIndex FromLinear(int linear) const {
    const int x = linear % dims.x();
    const int y = (linear / dims.x()) % dims.y();
    const int z = linear / (dims.x() * dims.y());
    return VoxelIndex(x, y, z);
  }

  WorldPoint Center(const VoxelIndex& v) const {
    return origin + (v.cast<double>().array() + 0.5).matrix() * voxel_size;
  }

  WorldPoint max_corner() const {
    return origin + dims.cast<double>() * voxel_size;
  }

  bool operator==(const GridGeometry& o) const {
    return origin == o.origin && voxel_size == o.voxel_size && dims == o.dims;
  }

  WorldPoint origin = WorldPoint::Zero();
  double voxel_size = 1.0;
  VoxelIndex dims = VoxelIndex(1, 1, 1);
};

// Clips segment a->b to the grid box. Returns false when the segment misses
// the box; otherwise t_enter <= t_exit are the parameters along a + t(b - a).
inline bool ClipSegment(const GridGeometry& grid, const WorldPoint& a,
                        const WorldPoint& b, double* t_enter, double* t_exit) {
  const WorldPoint lo = grid.origin;
  const WorldPoint hi = grid.max_corner();
  const Eigen::Vector3d d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) {
      if (a[axis] < lo[axis] || a[axis] >= hi[axis]) return false;
      continue;
    }
    double ta = (lo[axis] - a[axis]) / d[axis];
    double tb = (hi[axis] - a[axis]) / d[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  *t_enter = t0;
  *t_exit = t1;
  return true;
}

// Integer 3D digital differential analyzer (Amanatides & Woo). Visits, in
// order from a to b, every voxel the segment passes through after clipping
// to the grid. When the segment crosses two or three voxel faces at the same
// parameter the step order is x, then y, then z, so a segment through a
// voxel corner also visits the face-adjacent voxels on the way. The visitor
// returns false to stop early; TraverseSegment then returns false.
template <typename Visitor>
bool TraverseSegment(const GridGeometry& grid, const WorldPoint& a,
                     const WorldPoint& b, Visitor&& visit) {
  double t_enter = 0.0;
  double t_exit = 0.0;
  if (!ClipSegment(grid, a, b, &t_enter, &t_exit)) return true;
  const Eigen::Vector3d full = b - a;
  const WorldPoint start = a + t_enter * full;
  const WorldPoint end = a + t_exit * full;
  const VoxelIndex upper = grid.dims - VoxelIndex::Ones();
  VoxelIndex current =
      grid.IndexOf(start).cwiseMax(VoxelIndex::Zero()).cwiseMin(upper);
  const VoxelIndex last =
      grid.IndexOf(end).cwiseMax(VoxelIndex::Zero()).cwiseMin(upper);

  const Eigen::Vector3d d = end - start;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::Vector3i step = Eigen::Vector3i::Zero();
  Eigen::Vector3d t_max = Eigen::Vector3d::Constant(kInf);
  Eigen::Vector3d t_delta = Eigen::Vector3d::Constant(kInf);
  for (int axis = 0; axis < 3; ++axis) {
    if (current[axis] == last[axis]) continue;
    step[axis] = last[axis] > current[axis] ? 1 : -1;
    const double boundary =
        grid.origin[axis] +
        (current[axis] + (step[axis] > 0 ? 1 : 0)) * grid.voxel_size;
    if (d[axis] != 0.0) {
      t_max[axis] = (boundary - start[axis]) / d[axis];
      t_delta[axis] = grid.voxel_size / std::abs(d[axis]);
    } else {
      t_max[axis] = 0.0;
    }
  }

  int remaining = (last - current).cwiseAbs().sum();
  if (!visit(static_cast<const VoxelIndex&>(current))) return false;
  while (remaining-- > 0) {
    int axis = 0;
    for (int k = 1; k < 3; ++k) {
      if (t_max[k] < t_max[axis]) axis = k;
    }
    current[axis] += step[axis];
    if (current[axis] == last[axis]) {
      t_max[axis] = kInf;
    } else {
      t_max[axis] += t_delta[axis];
    }
    if (!visit(static_cast<const VoxelIndex&>(current))) return false;
  }
  return true;
}

inline std::vector<VoxelIndex> VoxelsOnSegment(const GridGeometry& grid,
                                               const WorldPoint& a,
                                               const WorldPoint& b) {
  std::vector<VoxelIndex> out;
  TraverseSegment(grid, a, b, [&](const VoxelIndex& v) {
    out.push_back(v);
    return true;
  });
  return out;
}

}  // namespace mapping
}  // namespace skyframe

#endif  // SKYFRAME_MAPPING_GRID_GEOMETRY_H_
