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

#include "skyframe/mapping/signed_distance_field.h"

#include <algorithm>
#include <cmath>

namespace skyframe {
namespace mapping {

SignedDistanceField::SignedDistanceField(const GridGeometry& geometry,
                                         double truncation)
    : geometry_(geometry),
      truncation_(truncation),
      sq_(geometry.num_voxels(), kFar),
      nearest_(geometry.num_voxels(), -1),
      border_(geometry.num_voxels(), 0) {
  if (!(truncation > 0.0) || !std::isfinite(truncation)) {
    throw InvalidArgument("SignedDistanceField: truncation must be positive");
  }
  const double lattice = truncation / geometry.voxel_size;
  truncation_sq_ = lattice * lattice;
  radius_ = static_cast<int>(std::ceil(lattice));
}

std::int32_t SignedDistanceField::SquaredDistance(int a, int b) const {
  const VoxelIndex d = geometry_.FromLinear(a) - geometry_.FromLinear(b);
  return d.squaredNorm();
}

double SignedDistanceField::Magnitude(int linear) const {
  const std::int32_t sq = sq_[linear];
  if (sq == kFar) return truncation_;
  return std::min(truncation_,
                  std::sqrt(static_cast<double>(sq)) * geometry_.voxel_size);
}

void SignedDistanceField::ClearReferencesTo(int removed,
                                            std::vector<int>* cleared) {
  // Every voxel that can reference `removed` lies within the truncation
  // radius of it, so the raise is a bounded box sweep.
  const VoxelIndex center = geometry_.FromLinear(removed);
  const VoxelIndex lo = (center.array() - radius_).max(0).matrix();
  const VoxelIndex hi =
      (center.array() + radius_).min(geometry_.dims.array() - 1).matrix();
  for (int z = lo.z(); z <= hi.z(); ++z) {
    for (int y = lo.y(); y <= hi.y(); ++y) {
      int linear = geometry_.Linear(VoxelIndex(lo.x(), y, z));
      for (int x = lo.x(); x <= hi.x(); ++x, ++linear) {
        if (nearest_[linear] != removed) continue;
        nearest_[linear] = -1;
        sq_[linear] = kFar;
        cleared->push_back(linear);
      }
    }
  }
}

void SignedDistanceField::Update(const ChangeSet& changes) {
  if (changes.empty()) return;

  std::vector<int> cleared;
  for (const int v : changes.became_free) {
    if (!border_[v]) continue;
    border_[v] = 0;
    ClearReferencesTo(v, &cleared);
  }

  // Re-lower the cleared region from whatever still surrounds it.
  for (const int v : cleared) {
    const VoxelIndex c = geometry_.FromLinear(v);
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const VoxelIndex n = c + VoxelIndex(dx, dy, dz);
          if (!geometry_.InBounds(n)) continue;
          const int ln = geometry_.Linear(n);
          if (nearest_[ln] >= 0) queue_.emplace(sq_[ln], ln);
        }
      }
    }
  }

  for (const int v : changes.became_occ) {
    if (border_[v]) continue;
    border_[v] = 1;
    sq_[v] = 0;
    nearest_[v] = v;
    queue_.emplace(0, v);
  }

  Propagate();
  ++version_;
}

void SignedDistanceField::Propagate() {
  while (!queue_.empty()) {
    const auto [key, v] = queue_.top();
    queue_.pop();
    if (key != sq_[v]) continue;
    const int site = nearest_[v];
    if (site < 0 || !border_[site]) continue;
    const VoxelIndex c = geometry_.FromLinear(v);
    const VoxelIndex s = geometry_.FromLinear(site);
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const VoxelIndex n = c + VoxelIndex(dx, dy, dz);
          if (!geometry_.InBounds(n)) continue;
          const std::int32_t d = (n - s).squaredNorm();
          if (!WithinTruncation(d)) continue;
          const int ln = geometry_.Linear(n);
          if (d >= sq_[ln]) continue;
          sq_[ln] = d;
          nearest_[ln] = site;
          queue_.emplace(d, ln);
        }
      }
    }
  }
}

void SignedDistanceField::Rebuild(const OccupancyGrid& grid) {
  if (!(grid.geometry() == geometry_)) {
    throw InvalidArgument("SignedDistanceField: grid geometry mismatch");
  }
  std::fill(sq_.begin(), sq_.end(), kFar);
  std::fill(nearest_.begin(), nearest_.end(), -1);
  std::fill(border_.begin(), border_.end(), 0);
  queue_ = MinQueue();
  ChangeSet all;
  for (int v = 0; v < geometry_.num_voxels(); ++v) {
    if (grid.is_border(v)) all.became_occ.push_back(v);
  }
  if (all.empty()) {
    ++version_;
    return;
  }
  Update(all);
}

DistanceView::DistanceView(const OccupancyGrid& grid,
                           const SignedDistanceField& field)
    : grid_(&grid), field_(&field) {
  if (!(grid.geometry() == field.geometry())) {
    throw InvalidArgument("DistanceView: grid and field geometry differ");
  }
}

double DistanceView::Distance(const WorldPoint& p) const {
  return DistanceAndGradient(p).distance;
}

DistanceSample DistanceView::DistanceAndGradient(const WorldPoint& p) const {
  const GridGeometry& geo = grid_->geometry();
  DistanceSample out;
  if (!geo.Contains(p)) {
    out.distance = field_->truncation();
    return out;
  }
  const VoxelIndex containing = geo.IndexOf(p);
  const double sign = grid_->IsFree(geo.Linear(containing)) ? 1.0 : -1.0;

  const Eigen::Vector3d u =
      (p - geo.origin) / geo.voxel_size - Eigen::Vector3d::Constant(0.5);
  int lo[3];
  int hi[3];
  double frac[3];
  for (int axis = 0; axis < 3; ++axis) {
    const int i0 = static_cast<int>(std::floor(u[axis]));
    frac[axis] = u[axis] - i0;
    lo[axis] = std::clamp(i0, 0, geo.dims[axis] - 1);
    hi[axis] = std::clamp(i0 + 1, 0, geo.dims[axis] - 1);
  }

  double value = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  for (int corner = 0; corner < 8; ++corner) {
    const int bx = corner & 1;
    const int by = (corner >> 1) & 1;
    const int bz = (corner >> 2) & 1;
    const VoxelIndex v(bx ? hi[0] : lo[0], by ? hi[1] : lo[1],
                       bz ? hi[2] : lo[2]);
    const double m = field_->Magnitude(geo.Linear(v));
    const double wx = bx ? frac[0] : 1.0 - frac[0];
    const double wy = by ? frac[1] : 1.0 - frac[1];
    const double wz = bz ? frac[2] : 1.0 - frac[2];
    const double sx = bx ? 1.0 : -1.0;
    const double sy = by ? 1.0 : -1.0;
    const double sz = bz ? 1.0 : -1.0;
    value += wx * wy * wz * m;
    grad.x() += sx * wy * wz * m;
    grad.y() += wx * sy * wz * m;
    grad.z() += wx * wy * sz * m;
  }
  out.distance = sign * value;
  out.gradient = sign * grad / geo.voxel_size;
  return out;
}

Eigen::Vector3d DistanceView::CentralGradient(const WorldPoint& p) const {
  const double h = grid_->geometry().voxel_size;
  Eigen::Vector3d g;
  for (int axis = 0; axis < 3; ++axis) {
    WorldPoint plus = p;
    WorldPoint minus = p;
    plus[axis] += h;
    minus[axis] -= h;
    g[axis] = (Distance(plus) - Distance(minus)) / (2.0 * h);
  }
  return g;
}

bool LineOfSight(const OccupancyGrid& grid, const WorldPoint& a,
                 const WorldPoint& b) {
  return TraverseSegment(grid.geometry(), a, b, [&](const VoxelIndex& v) {
    return !grid.IsOccupied(grid.geometry().Linear(v));
  });
}

}  // namespace mapping
}  // namespace skyframe
