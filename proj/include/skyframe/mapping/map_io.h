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

#ifndef SKYFRAME_MAPPING_MAP_IO_H_
#define SKYFRAME_MAPPING_MAP_IO_H_

#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "skyframe/mapping/height_map.h"
#include "skyframe/mapping/occupancy_grid.h"
#include "skyframe/mapping/signed_distance_field.h"

namespace skyframe {
namespace mapping {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV point cloud: one "x,y,z,is_hit" record per line. Blank lines, lines
// starting with '#', and a leading "x,y,z,is_hit" header are skipped.
std::vector<RayReturn> ReadPointCloudCsv(std::istream& in);
void WritePointCloudCsv(std::ostream& out, const std::vector<RayReturn>& cloud);

// Binary frame, little endian:
//   uint32 count
//   count x { float32 x, float32 y, float32 z, uint32 flags }  (16 bytes)
// flags bit 0 is the hit flag; other bits must be zero.
std::vector<RayReturn> ReadPointCloudBinary(std::istream& in);
void WritePointCloudBinary(std::ostream& out,
                           const std::vector<RayReturn>& cloud);

// Height map as CSV (one row per y cell, lowest y first) and as an 8-bit
// binary PGM where 127 is 0 m and each gray level is `meters_per_level`.
void WriteHeightMapCsv(std::ostream& out, const HeightMap& map);
void WriteHeightMapPgm(std::ostream& out, const HeightMap& map,
                       double meters_per_level = 10.0 / 127.0);

// Signed distance at the voxel centers of one z layer, as CSV and as PGM
// scaled from -truncation (0) to +truncation (255).
void WriteDistanceSliceCsv(std::ostream& out, const DistanceView& view, int z);
void WriteDistanceSlicePgm(std::ostream& out, const DistanceView& view, int z);

}  // namespace mapping
}  // namespace skyframe

#endif  // SKYFRAME_MAPPING_MAP_IO_H_
