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

#ifndef SKYFRAME_SIM_WORLD_H_
#define SKYFRAME_SIM_WORLD_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "skyframe/core/types.h"
#include "skyframe/mapping/height_map.h"
#include "skyframe/mapping/occupancy_grid.h"
#include "skyframe/mapping/signed_distance_field.h"

namespace skyframe {
namespace sim {

enum class WorldKind { kEmpty, kSpheres, kBlockworld, kMound, kHeightMapFile };
std::string ToString(WorldKind kind);
WorldKind WorldKindFromString(const std::string& name);

struct SphereParams {
  int count = 20;
  double radius_min = 1.0;
  double radius_max = 4.0;
  // Sphere centers lie at heights in [radius + z_min, z_max - radius], so
  // the clutter stays below the usual camera altitude.
  double z_min = 0.0;
  double z_max = 8.0;
  // Horizontal gap kept between every sphere and the actor path.
  double corridor_clearance = 1.5;
  int max_attempts = 20000;
};

struct BlockworldParams {
  int blocks = 8;
  double length_min = 4.0;
  double length_max = 10.0;
  double gap_min = 2.0;
  double gap_max = 6.0;
  double depth_min = 3.0;
  double depth_max = 8.0;
  double height_min = 3.0;
  double height_max = 12.0;
  // Half-width of the clear corridor around the actor path (y = path_y).
  double corridor_half_width = 2.5;
  double path_y = 25.0;  // y of the actor path line
  double start_x = 5.0;  // first block starts here
};

struct MoundParams {
  double height = 8.0;
  double sigma = 6.0;
  Eigen::Vector2d center = Eigen::Vector2d(25.0, 25.0);
};

struct WorldConfig {
  WorldKind kind = WorldKind::kEmpty;
  Eigen::Vector3d size = Eigen::Vector3d(50.0, 50.0, 25.0);  // above ground
  double voxel_size = 1.0;
  double truncation = 5.0;
  SphereParams spheres;
  BlockworldParams blocks;
  MoundParams mound;
  std::string height_map_file;  // CSV, one row per y cell, cell = voxel
};

struct Sphere {
  WorldPoint center;
  double radius;
};

// Axis-aligned footprint [x0, x1] x [y0, y1] extruded to `height`.
struct Block {
  double x0, x1, y0, y1, height;
};

// Fully known voxel world: terrain extruded from a height map (the ground
// is a one-voxel layer below z = 0) plus optional spheres. A voxel is solid
// when its center lies under the terrain or inside a sphere. The occupancy
// grid marks solid voxels with a free face neighbor occupied (255), hidden
// solid interiors unknown (127) and the rest free (0), so the distance field
// keeps growing negative toward the inside of obstacles. Line of sight,
// IsOccupied and LiDAR use the solid mask.
class World {
 public:
  World(const WorldConfig& config, const mapping::HeightMap& terrain,
        std::vector<Sphere> spheres, std::vector<Block> blocks);
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  const mapping::GridGeometry& geometry() const { return grid_->geometry(); }
  const mapping::OccupancyGrid& grid() const { return *grid_; }
  const mapping::SignedDistanceField& field() const { return *field_; }
  mapping::DistanceView view() const { return {*grid_, *field_}; }
  const mapping::HeightMap& terrain() const { return terrain_; }
  const std::vector<Sphere>& spheres() const { return spheres_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const WorldConfig& config() const { return config_; }

  bool IsSolid(int linear) const;
  // Solid voxel containing p; false outside the grid.
  bool IsOccupied(const WorldPoint& p) const;
  bool LineOfSight(const WorldPoint& a, const WorldPoint& b) const;
  double SignedDistance(const WorldPoint& p) const;

 private:
  WorldConfig config_;
  mapping::HeightMap terrain_;
  std::vector<Sphere> spheres_;
  std::vector<Block> blocks_;
  std::unique_ptr<mapping::OccupancyGrid> grid_;
  std::unique_ptr<mapping::SignedDistanceField> field_;
  std::vector<std::uint8_t> solid_;
};

// Grid covering the configured box, with one extra voxel layer for ground.
mapping::GridGeometry WorldGeometry(const WorldConfig& config);

// `count` pairwise-disjoint spheres whose horizontal distance to every
// segment of `path` exceeds radius + corridor_clearance. Throws when the
// placement fails within max_attempts.
std::vector<Sphere> GenerateSpheres(const WorldConfig& config,
                                    const std::vector<Eigen::Vector2d>& path,
                                    std::uint64_t seed);

// Blocks alternating between the two sides of the corridor along +x, with
// seeded lengths, gaps, depths and heights. The first side is seeded too.
std::vector<Block> GenerateBlocks(const WorldConfig& config,
                                  std::uint64_t seed);

// Terrain for the configured world kind (flat, blocks or mound).
mapping::HeightMap BuildTerrain(const WorldConfig& config,
                                const std::vector<Block>& blocks);

// Generates the configured world. `path` is the actor path used for sphere
// clearance.
std::unique_ptr<World> BuildWorld(const WorldConfig& config,
                                  const std::vector<Eigen::Vector2d>& path,
                                  std::uint64_t seed);

// Horizontal distance from p to the polyline.
double DistanceToPath(const Eigen::Vector2d& p,
                      const std::vector<Eigen::Vector2d>& path);

struct LidarConfig {
  int rings = 16;
  double min_elevation_deg = -15.0;
  double max_elevation_deg = 15.0;
  int azimuths = 360;
  double range = 50.0;
};

// Unit ray directions, ring-major.
std::vector<Eigen::Vector3d> LidarPattern(const LidarConfig& config);

// Casts every ray through the world grid. A ray that reaches a solid voxel
// within range returns a hit where it enters that voxel (a hair inside);
// otherwise a miss at full range.
std::vector<mapping::RayReturn> SimulateLidar(
    const World& world, const WorldPoint& sensor,
    const std::vector<Eigen::Vector3d>& pattern, double range);

}  // namespace sim
}  // namespace skyframe

#endif  // SKYFRAME_SIM_WORLD_H_
