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

#ifndef SKYFRAME_MAPPING_HEIGHT_MAP_H_
#define SKYFRAME_MAPPING_HEIGHT_MAP_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "Eigen/Core"
#include "skyframe/core/types.h"

namespace skyframe {
namespace mapping {

// 2.5D terrain: each cell holds the running mean of the hit heights that fell
// into it. Untouched cells, and everything outside the map, read as 0 m.
class HeightMap {
 public:
  HeightMap(const Eigen::Vector2d& origin, double cell_size, int nx, int ny);

  const Eigen::Vector2d& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  // Folds one hit into its cell mean. Out-of-map hits are dropped and
  // counted.
  void AddHit(const WorldPoint& hit);

  // Overwrites a cell as if it held exactly one sample of `height`.
  void SetCell(int ix, int iy, double height);

  std::optional<Eigen::Vector2i> CellOf(double x, double y) const;
  double HeightAt(double x, double y) const;
  double CellHeight(int ix, int iy) const { return mean_[Index(ix, iy)]; }
  std::uint32_t CellCount(int ix, int iy) const {
    return count_[Index(ix, iy)];
  }
  Eigen::Vector2d CellCenter(int ix, int iy) const;
  std::uint64_t dropped_hits() const { return dropped_; }

 private:
  int Index(int ix, int iy) const { return iy * nx_ + ix; }

  Eigen::Vector2d origin_;
  double cell_size_;
  int nx_;
  int ny_;
  std::vector<double> mean_;
  std::vector<std::uint32_t> count_;
  std::uint64_t dropped_ = 0;
};

// Pinhole camera with OpenCV axes: x right, y down, z along the optical axis.
// `rotation` maps camera-frame vectors into the world frame.
struct CameraModel {
  WorldPoint position = WorldPoint::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double fx = 500.0;
  double fy = 500.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;

  // Camera at `position` with the optical axis at world yaw `yaw` and
  // pitched down by `pitch_down` radians (pi/2 looks straight down).
  // Zero roll: the image x axis stays horizontal.
  static CameraModel FromYawPitch(const WorldPoint& position, double yaw,
                                  double pitch_down, double fx, double fy,
                                  int width, int height);

  // Unit world-frame direction through pixel (u, v).
  Eigen::Vector3d PixelRay(double u, double v) const;
  bool InImage(double u, double v) const {
    return u >= 0.0 && v >= 0.0 && u <= width && v <= height;
  }
};

// Marches the ray through pixel (u, v) from the camera center in steps of
// half a height-map cell and returns the first crossing below the terrain,
// refined linearly between the bracketing samples. Empty when the ray stays
// above the terrain within `max_range`. Throws for pixels outside the image.
std::optional<WorldPoint> RaycastPixelToGround(const CameraModel& camera,
                                               double u, double v,
                                               const HeightMap& terrain,
                                               double max_range = 300.0);

// World yaw of an image-space heading. `image_heading` is measured
// counter-clockwise in the image from the +u axis (v points down). The foot
// pixel and a pixel one unit along the heading are both raycast to the
// ground; the heading is the direction between the two hits. Assumes zero
// gimbal roll.
std::optional<double> ProjectHeadingToWorld(const CameraModel& camera, double u,
                                            double v, double image_heading,
                                            const HeightMap& terrain);

}  // namespace mapping
}  // namespace skyframe

#endif  // SKYFRAME_MAPPING_HEIGHT_MAP_H_
