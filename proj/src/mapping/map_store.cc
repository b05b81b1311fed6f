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

#include "skyframe/mapping/map_store.h"

namespace skyframe {
namespace mapping {

MapStore::MapStore(const GridGeometry& geometry, const OccupancyParams& params,
                   double truncation)
    : MapStore(OccupancyGrid(geometry, params), truncation) {}

MapStore::MapStore(const OccupancyGrid& grid, double truncation) {
  auto snapshot = std::make_shared<MapSnapshot>(
      grid, SignedDistanceField(grid.geometry(), truncation));
  snapshot->field.Rebuild(snapshot->grid);
  current_ = std::move(snapshot);
}

std::shared_ptr<const MapSnapshot> MapStore::Snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return current_;
}

ChangeSet MapStore::Integrate(const WorldPoint& sensor,
                              std::span<const RayReturn> returns) {
  auto next = std::make_shared<MapSnapshot>(*Snapshot());
  ChangeSet changes = next->grid.InsertScan(sensor, returns);
  next->field.Update(changes);
  Publish(std::move(next));
  return changes;
}

void MapStore::Publish(std::shared_ptr<const MapSnapshot> next) {
  std::lock_guard<std::mutex> lock(mutex_);
  current_ = std::move(next);
}

}  // namespace mapping
}  // namespace skyframe
