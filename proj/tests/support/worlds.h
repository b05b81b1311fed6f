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

#ifndef SKYFRAME_TESTS_SUPPORT_WORLDS_H_
#define SKYFRAME_TESTS_SUPPORT_WORLDS_H_

#include <memory>
#include <random>

#include "skyframe/mapping/occupancy_grid.h"
#include "skyframe/mapping/signed_distance_field.h"

namespace skyframe {
namespace testing {

// Fully known voxel world with a view over its distance field. Heap
// allocated so the view's references stay valid when the world is moved.
struct TestWorld {
  TestWorld(const mapping::GridGeometry& g, double truncation)
      : grid(g, mapping::OccupancyParams{}), field(g, truncation) {
    grid.Fill(0);
  }

  void SetBox(const mapping::VoxelIndex& lo, const mapping::VoxelIndex& hi) {
    for (int z = lo.z(); z <= hi.z(); ++z) {
      for (int y = lo.y(); y <= hi.y(); ++y) {
        for (int x = lo.x(); x <= hi.x(); ++x) {
          const mapping::VoxelIndex v(x, y, z);
          if (grid.geometry().InBounds(v)) {
            grid.SetValue(grid.geometry().Linear(v), 255);
          }
        }
      }
    }
  }

  void Finish() {
    field.Update(grid.SyncBorders());
    view = std::make_unique<mapping::DistanceView>(grid, field);
  }

  mapping::OccupancyGrid grid;
  mapping::SignedDistanceField field;
  std::unique_ptr<mapping::DistanceView> view;
};

// A 30 m cube of 1 m voxels with a handful of random boxes.
inline std::unique_ptr<TestWorld> RandomBoxWorld(std::uint32_t seed,
                                                 int boxes = 6) {
  const mapping::GridGeometry g(WorldPoint::Zero(), 1.0,
                                mapping::VoxelIndex(30, 30, 30));
  auto world = std::make_unique<TestWorld>(g, 5.0);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pos(4, 24);
  std::uniform_int_distribution<int> size(1, 4);
  for (int b = 0; b < boxes; ++b) {
    const mapping::VoxelIndex lo(pos(rng), pos(rng), pos(rng));
    world->SetBox(lo,
                  lo + mapping::VoxelIndex(size(rng), size(rng), size(rng)));
  }
  world->Finish();
  return world;
}

}  // namespace testing
}  // namespace skyframe

#endif  // SKYFRAME_TESTS_SUPPORT_WORLDS_H_
