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

#include "skyframe/sim/world.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace skyframe {
namespace sim {
namespace {

// Depth of a LiDAR hit point inside the hit voxel, in voxels.
constexpr double kHitInset = 1e-3;

int Cells(double length, double voxel) {
  return std::max(1, static_cast<int>(std::lround(length / voxel)));
}

mapping::HeightMap ReadHeightMapFile(const WorldConfig& config) {
  std::ifstream in(config.height_map_file);
  if (!in) {
    throw InvalidArgument("cannot open height map file '" +
                          config.height_map_file + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<double> row;
    double v = 0.0;
    while (fields >> v) row.push_back(v);
    if (!fields.eof()) {
      throw InvalidArgument("height map file: bad number on row " +
                            std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  const int nx = Cells(config.size.x(), config.voxel_size);
  const int ny = Cells(config.size.y(), config.voxel_size);
  if (static_cast<int>(rows.size()) != ny) {
    throw InvalidArgument("height map file: expected " + std::to_string(ny) +
                          " rows");
  }
  mapping::HeightMap map(Eigen::Vector2d::Zero(), config.voxel_size, nx, ny);
  for (int iy = 0; iy < ny; ++iy) {
    if (static_cast<int>(rows[iy].size()) != nx) {
      throw InvalidArgument("height map file: expected " + std::to_string(nx) +
                            " columns on row " + std::to_string(iy + 1));
    }
    for (int ix = 0; ix < nx; ++ix) map.SetCell(ix, iy, rows[iy][ix]);
  }
  return map;
}

}  // namespace

std::string ToString(WorldKind kind) {
  switch (kind) {
    case WorldKind::kEmpty:
      return "empty";
    case WorldKind::kSpheres:
      return "spheres";
    case WorldKind::kBlockworld:
      return "blockworld";
    case WorldKind::kMound:
      return "mound";
    case WorldKind::kHeightMapFile:
      return "height_map_file";
  }
  return "unknown";
}

WorldKind WorldKindFromString(const std::string& name) {
  for (WorldKind k :
       {WorldKind::kEmpty, WorldKind::kSpheres, WorldKind::kBlockworld,
        WorldKind::kMound, WorldKind::kHeightMapFile}) {
    if (ToString(k) == name) return k;
  }
  throw InvalidArgument("unknown world kind '" + name + "'");
}

mapping::GridGeometry WorldGeometry(const WorldConfig& config) {
  const double v = config.voxel_size;
  if (!(v > 0.0) || !(config.size.array() > 0.0).all()) {
    throw InvalidArgument("world: size and voxel size must be positive");
  }
  return mapping::GridGeometry(
      WorldPoint(0.0, 0.0, -v), v,
      mapping::VoxelIndex(Cells(config.size.x(), v), Cells(config.size.y(), v),
                          Cells(config.size.z(), v) + 1));
}

World::World(const WorldConfig& config, const mapping::HeightMap& terrain,
             std::vector<Sphere> spheres, std::vector<Block> blocks)
    : config_(config),
      terrain_(terrain),
      spheres_(std::move(spheres)),
      blocks_(std::move(blocks)) {
  const mapping::GridGeometry g = WorldGeometry(config);
  solid_.assign(g.num_voxels(), 0);
  for (int z = 0; z < g.dims.z(); ++z) {
    for (int y = 0; y < g.dims.y(); ++y) {
      for (int x = 0; x < g.dims.x(); ++x) {
        const mapping::VoxelIndex v(x, y, z);
        const WorldPoint c = g.Center(v);
        bool solid = c.z() < terrain_.HeightAt(c.x(), c.y());
        for (const Sphere& s : spheres_) {
          if (solid) break;
          solid = (c - s.center).squaredNorm() <= s.radius * s.radius;
        }
        solid_[g.Linear(v)] = solid ? 1 : 0;
      }
    }
  }

  // Map as a perfect sensor would leave it: solid voxels with a free face
  // neighbor are occupied, hidden interiors stay unknown, the rest is free.
  grid_ =
      std::make_unique<mapping::OccupancyGrid>(g, mapping::OccupancyParams{});
  grid_->Fill(0);
  const mapping::VoxelIndex faces[6] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                        {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
  for (int linear = 0; linear < g.num_voxels(); ++linear) {
    if (!solid_[linear]) continue;
    const mapping::VoxelIndex v = g.FromLinear(linear);
    bool surface = false;
    for (const auto& f : faces) {
      const mapping::VoxelIndex n = v + f;
      if (g.InBounds(n) && !solid_[g.Linear(n)]) surface = true;
    }
    grid_->SetValue(linear, surface ? 255 : mapping::kUnknownValue);
  }
  field_ = std::make_unique<mapping::SignedDistanceField>(g, config.truncation);
  field_->Update(grid_->SyncBorders());
}

bool World::IsSolid(int linear) const { return solid_[linear] != 0; }

bool World::IsOccupied(const WorldPoint& p) const {
  const mapping::GridGeometry& g = geometry();
  if (!g.Contains(p)) return false;
  return IsSolid(g.Linear(g.IndexOf(p)));
}

bool World::LineOfSight(const WorldPoint& a, const WorldPoint& b) const {
  const mapping::GridGeometry& g = geometry();
  return mapping::TraverseSegment(g, a, b, [&](const mapping::VoxelIndex& v) {
    return !IsSolid(g.Linear(v));
  });
}

double World::SignedDistance(const WorldPoint& p) const {
  return view().Distance(p);
}

double DistanceToPath(const Eigen::Vector2d& p,
                      const std::vector<Eigen::Vector2d>& path) {
  if (path.empty()) return std::numeric_limits<double>::infinity();
  if (path.size() == 1) return (p - path[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Eigen::Vector2d a = path[i];
    const Eigen::Vector2d d = path[i + 1] - a;
    const double len2 = d.squaredNorm();
    const double t =
        len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (p - (a + t * d)).norm());
  }
  return best;
}

std::vector<Sphere> GenerateSpheres(const WorldConfig& config,
                                    const std::vector<Eigen::Vector2d>& path,
                                    std::uint64_t seed) {
  const SphereParams& p = config.spheres;
  if (p.count < 0 || !(p.radius_min > 0.0) || p.radius_max < p.radius_min) {
    throw InvalidArgument("spheres: bad count or radius range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Sphere> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < p.count) {
    if (++attempts > p.max_attempts) {
      throw InvalidArgument("spheres: could not place " +
                            std::to_string(p.count) + " disjoint spheres");
    }
    const double r = p.radius_min + (p.radius_max - p.radius_min) * unit(rng);
    const double x = r + (config.size.x() - 2 * r) * unit(rng);
    const double y = r + (config.size.y() - 2 * r) * unit(rng);
    const double z_lo = p.z_min + r;
    const double z_hi = std::max(z_lo, p.z_max - r);
    const double z = z_lo + (z_hi - z_lo) * unit(rng);
    const Sphere s{WorldPoint(x, y, z), r};
    if (DistanceToPath(Eigen::Vector2d(x, y), path) <=
        r + p.corridor_clearance) {
      continue;
    }
    const bool overlaps =
        std::any_of(out.begin(), out.end(), [&](const Sphere& o) {
          return (o.center - s.center).norm() <= o.radius + s.radius;
        });
    if (!overlaps) out.push_back(s);
  }
  return out;
}

std::vector<Block> GenerateBlocks(const WorldConfig& config,
                                  std::uint64_t seed) {
  const BlockworldParams& p = config.blocks;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) {
    return lo + (hi - lo) * unit(rng);
  };
  std::vector<Block> out;
  bool left = unit(rng) < 0.5;
  double x = p.start_x;
  for (int b = 0; b < p.blocks; ++b) {
    const double length = between(p.length_min, p.length_max);
    const double depth = between(p.depth_min, p.depth_max);
    const double height = between(p.height_min, p.height_max);
    if (x + length > config.size.x()) break;
    Block block{x, x + length, 0.0, 0.0, height};
    if (left) {
      block.y0 = p.path_y + p.corridor_half_width;
      block.y1 = block.y0 + depth;
    } else {
      block.y1 = p.path_y - p.corridor_half_width;
      block.y0 = block.y1 - depth;
    }
    out.push_back(block);
    x += length + between(p.gap_min, p.gap_max);
    left = !left;
  }
  return out;
}

mapping::HeightMap BuildTerrain(const WorldConfig& config,
                                const std::vector<Block>& blocks) {
  if (config.kind == WorldKind::kHeightMapFile)
    return ReadHeightMapFile(config);
  const double v = config.voxel_size;
  mapping::HeightMap map(Eigen::Vector2d::Zero(), v, Cells(config.size.x(), v),
                         Cells(config.size.y(), v));
  for (int iy = 0; iy < map.ny(); ++iy) {
    for (int ix = 0; ix < map.nx(); ++ix) {
      const Eigen::Vector2d c = map.CellCenter(ix, iy);
      double h = 0.0;
      if (config.kind == WorldKind::kMound) {
        const double r2 = (c - config.mound.center).squaredNorm();
        h = config.mound.height *
            std::exp(-r2 / (2.0 * config.mound.sigma * config.mound.sigma));
      }
      for (const Block& b : blocks) {
        // Strict: a cell centered on the footprint edge stays outside, so
        // the corridor keeps its full width after rasterization.
        if (c.x() > b.x0 && c.x() < b.x1 && c.y() > b.y0 && c.y() < b.y1) {
          h = std::max(h, b.height);
        }
      }
      map.SetCell(ix, iy, h);
    }
  }
  return map;
}

std::unique_ptr<World> BuildWorld(const WorldConfig& config,
                                  const std::vector<Eigen::Vector2d>& path,
                                  std::uint64_t seed) {
  std::vector<Block> blocks;
  std::vector<Sphere> spheres;
  if (config.kind == WorldKind::kBlockworld) {
    blocks = GenerateBlocks(config, seed);
  }
  if (config.kind == WorldKind::kSpheres) {
    spheres = GenerateSpheres(config, path, seed);
  }
  const mapping::HeightMap terrain = BuildTerrain(config, blocks);
  return std::make_unique<World>(config, terrain, std::move(spheres),
                                 std::move(blocks));
}

std::vector<Eigen::Vector3d> LidarPattern(const LidarConfig& config) {
  if (config.rings < 1 || config.azimuths < 1 || !(config.range > 0.0)) {
    throw InvalidArgument("lidar: rings, azimuths and range must be positive");
  }
  std::vector<Eigen::Vector3d> rays;
  rays.reserve(static_cast<std::size_t>(config.rings) * config.azimuths);
  constexpr double kDeg = std::numbers::pi / 180.0;
  for (int r = 0; r < config.rings; ++r) {
    const double elev =
        config.rings == 1
            ? config.min_elevation_deg
            : config.min_elevation_deg +
                  (config.max_elevation_deg - config.min_elevation_deg) * r /
                      (config.rings - 1);
    for (int a = 0; a < config.azimuths; ++a) {
      const double az = 2.0 * std::numbers::pi * a / config.azimuths;
      rays.emplace_back(std::cos(elev * kDeg) * std::cos(az),
                        std::cos(elev * kDeg) * std::sin(az),
                        std::sin(elev * kDeg));
    }
  }
  return rays;
}

std::vector<mapping::RayReturn> SimulateLidar(
    const World& world, const WorldPoint& sensor,
    const std::vector<Eigen::Vector3d>& pattern, double range) {
  const mapping::GridGeometry& g = world.geometry();
  std::vector<mapping::RayReturn> out;
  out.reserve(pattern.size());
  for (const Eigen::Vector3d& dir : pattern) {
    const WorldPoint end = sensor + range * dir;
    std::optional<mapping::VoxelIndex> hit;
    mapping::TraverseSegment(g, sensor, end, [&](const mapping::VoxelIndex& v) {
      if (world.IsSolid(g.Linear(v))) {
        hit = v;
        return false;
      }
      return true;
    });
    if (hit) {
      // Entry point of the ray into the hit voxel (slab method), nudged
      // inside so re-tracing the return crosses the same voxels.
      const WorldPoint lo =
          g.Center(*hit) - WorldPoint::Constant(0.5 * g.voxel_size);
      double t_enter = 0.0;
      for (int axis = 0; axis < 3; ++axis) {
        if (dir[axis] == 0.0) continue;
        const double a = (lo[axis] - sensor[axis]) / dir[axis];
        const double b = (lo[axis] + g.voxel_size - sensor[axis]) / dir[axis];
        t_enter = std::max(t_enter, std::min(a, b));
      }
      out.push_back(
          {sensor + (t_enter + kHitInset * g.voxel_size) * dir, true});
    } else {
      out.push_back({end, false});
    }
  }
  return out;
}

}  // namespace sim
}  // namespace skyframe
