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

#ifndef SKYFRAME_MAPPING_MAP_STORE_H_
#define SKYFRAME_MAPPING_MAP_STORE_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>

#include "skyframe/mapping/occupancy_grid.h"
#include "skyframe/mapping/signed_distance_field.h"

namespace skyframe {
namespace mapping {

// An occupancy grid and its distance field at one map version.
struct MapSnapshot {
  MapSnapshot(OccupancyGrid g, SignedDistanceField f)
      : grid(std::move(g)), field(std::move(f)) {}

  DistanceView view() const { return DistanceView(grid, field); }
  std::uint64_t version() const { return field.version(); }

  OccupancyGrid grid;
  SignedDistanceField field;
};

// Single-writer, multi-reader map. Readers take an immutable snapshot and
// keep using it while the writer integrates the next scan into a private
// copy. Publishing swaps a pointer under a short lock, so a reader never
// waits for a distance-field update.
class MapStore {
 public:
  MapStore(const GridGeometry& geometry, const OccupancyParams& params,
           double truncation);
  // Starts from an existing grid; the field is rebuilt from its border set.
  MapStore(const OccupancyGrid& grid, double truncation);

  std::shared_ptr<const MapSnapshot> Snapshot() const;

  // Integrates one scan and publishes the result. Returns the border changes.
  // Must only be called from the single writer thread.
  ChangeSet Integrate(const WorldPoint& sensor,
                      std::span<const RayReturn> returns);

 private:
  void Publish(std::shared_ptr<const MapSnapshot> next);

  mutable std::mutex mutex_;
  std::shared_ptr<const MapSnapshot> current_;
};

}  // namespace mapping
}  // namespace skyframe

#endif  // SKYFRAME_MAPPING_MAP_STORE_H_
