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

#include "skyframe/mapping/map_io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

namespace skyframe {
namespace mapping {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary point-cloud I/O assumes a little-endian host");

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T ReadLe(std::istream& in) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError("point cloud: truncated binary frame");
  return value;
}

template <typename T>
void WriteLe(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

void WritePgmHeader(std::ostream& out, int width, int height) {
  out << "P5\n" << width << " " << height << "\n255\n";
}

}  // namespace

std::vector<RayReturn> ReadPointCloudCsv(std::istream& in) {
  std::vector<RayReturn> cloud;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line_number == 1 && line.rfind("x", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    RayReturn r;
    int hit = 0;
    if (!(fields >> r.point.x() >> r.point.y() >> r.point.z() >> hit) ||
        (hit != 0 && hit != 1) || !r.point.allFinite()) {
      throw FormatError("point cloud: bad record on line " +
                        std::to_string(line_number));
    }
    std::string extra;
    if (fields >> extra) {
      throw FormatError("point cloud: extra field on line " +
                        std::to_string(line_number));
    }
    r.is_hit = hit == 1;
    cloud.push_back(r);
  }
  return cloud;
}

void WritePointCloudCsv(std::ostream& out,
                        const std::vector<RayReturn>& cloud) {
  out << "x,y,z,is_hit\n";
  for (const RayReturn& r : cloud) {
    out << r.point.x() << "," << r.point.y() << "," << r.point.z() << ","
        << (r.is_hit ? 1 : 0) << "\n";
  }
}

std::vector<RayReturn> ReadPointCloudBinary(std::istream& in) {
  const auto count = ReadLe<std::uint32_t>(in);
  std::vector<RayReturn> cloud;
  cloud.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    RayReturn r;
    r.point.x() = ReadLe<float>(in);
    r.point.y() = ReadLe<float>(in);
    r.point.z() = ReadLe<float>(in);
    const auto flags = ReadLe<std::uint32_t>(in);
    if ((flags & ~1u) != 0) {
      throw FormatError("point cloud: reserved flag bits set in record " +
                        std::to_string(i));
    }
    r.is_hit = (flags & 1u) != 0;
    cloud.push_back(r);
  }
  return cloud;
}

void WritePointCloudBinary(std::ostream& out,
                           const std::vector<RayReturn>& cloud) {
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(cloud.size()));
  for (const RayReturn& r : cloud) {
    WriteLe<float>(out, static_cast<float>(r.point.x()));
    WriteLe<float>(out, static_cast<float>(r.point.y()));
    WriteLe<float>(out, static_cast<float>(r.point.z()));
    WriteLe<std::uint32_t>(out, r.is_hit ? 1u : 0u);
  }
}

void WriteHeightMapCsv(std::ostream& out, const HeightMap& map) {
  for (int iy = 0; iy < map.ny(); ++iy) {
    for (int ix = 0; ix < map.nx(); ++ix) {
      if (ix > 0) out << ",";
      out << map.CellHeight(ix, iy);
    }
    out << "\n";
  }
}

void WriteHeightMapPgm(std::ostream& out, const HeightMap& map,
                       double meters_per_level) {
  WritePgmHeader(out, map.nx(), map.ny());
  // PGM rows run top to bottom; put the highest y first so +y is up.
  for (int iy = map.ny() - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < map.nx(); ++ix) {
      const double level =
          kUnknownValue + std::round(map.CellHeight(ix, iy) / meters_per_level);
      out.put(static_cast<char>(std::clamp(level, 0.0, 255.0)));
    }
  }
}

void WriteDistanceSliceCsv(std::ostream& out, const DistanceView& view, int z) {
  const GridGeometry& geo = view.grid().geometry();
  if (z < 0 || z >= geo.dims.z()) {
    throw InvalidArgument("distance slice: z layer out of range");
  }
  for (int y = 0; y < geo.dims.y(); ++y) {
    for (int x = 0; x < geo.dims.x(); ++x) {
      if (x > 0) out << ",";
      out << view.Distance(geo.Center(VoxelIndex(x, y, z)));
    }
    out << "\n";
  }
}

void WriteDistanceSlicePgm(std::ostream& out, const DistanceView& view, int z) {
  const GridGeometry& geo = view.grid().geometry();
  if (z < 0 || z >= geo.dims.z()) {
    throw InvalidArgument("distance slice: z layer out of range");
  }
  WritePgmHeader(out, geo.dims.x(), geo.dims.y());
  const double trunc = view.truncation();
  for (int y = geo.dims.y() - 1; y >= 0; --y) {
    for (int x = 0; x < geo.dims.x(); ++x) {
      const double d = view.Distance(geo.Center(VoxelIndex(x, y, z)));
      const double level = std::round((d + trunc) / (2.0 * trunc) * 255.0);
      out.put(static_cast<char>(std::clamp(level, 0.0, 255.0)));
    }
  }
}

}  // namespace mapping
}  // namespace skyframe
