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

#include "skyframe/mapping/height_map.h"

#include <cmath>

#include "Eigen/Geometry"

namespace skyframe {
namespace mapping {

HeightMap::HeightMap(const Eigen::Vector2d& origin, double cell_size, int nx,
                     int ny)
    : origin_(origin),
      cell_size_(cell_size),
      nx_(nx),
      ny_(ny),
      mean_(static_cast<std::size_t>(nx) * ny, 0.0),
      count_(static_cast<std::size_t>(nx) * ny, 0) {
  if (!(cell_size > 0.0) || nx <= 0 || ny <= 0) {
    throw InvalidArgument("HeightMap: bad cell size or dimensions");
  }
}

std::optional<Eigen::Vector2i> HeightMap::CellOf(double x, double y) const {
  const int ix = static_cast<int>(std::floor((x - origin_.x()) / cell_size_));
  const int iy = static_cast<int>(std::floor((y - origin_.y()) / cell_size_));
  if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return std::nullopt;
  return Eigen::Vector2i(ix, iy);
}

void HeightMap::AddHit(const WorldPoint& hit) {
  const auto cell = CellOf(hit.x(), hit.y());
  if (!cell || !std::isfinite(hit.z())) {
    ++dropped_;
    return;
  }
  const int i = Index(cell->x(), cell->y());
  ++count_[i];
  mean_[i] += (hit.z() - mean_[i]) / count_[i];
}

void HeightMap::SetCell(int ix, int iy, double height) {
  const int i = Index(ix, iy);
  mean_[i] = height;
  count_[i] = 1;
}

double HeightMap::HeightAt(double x, double y) const {
  const auto cell = CellOf(x, y);
  if (!cell) return 0.0;
  return mean_[Index(cell->x(), cell->y())];
}

Eigen::Vector2d HeightMap::CellCenter(int ix, int iy) const {
  return origin_ + Eigen::Vector2d(ix + 0.5, iy + 0.5) * cell_size_;
}

CameraModel CameraModel::FromYawPitch(const WorldPoint& position, double yaw,
                                      double pitch_down, double fx, double fy,
                                      int width, int height) {
  CameraModel cam;
  cam.position = position;
  cam.fx = fx;
  cam.fy = fy;
  cam.width = width;
  cam.height = height;
  cam.cx = width / 2.0;
  cam.cy = height / 2.0;
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InvalidArgument("CameraModel: focal lengths must be positive");
  }
  // Level camera looking along world +x: optical axis +x, image right -y,
  // image down -z. Then pitch about the camera x axis and yaw about world z.
  Eigen::Matrix3d level;
  level.col(0) = Eigen::Vector3d(0.0, -1.0, 0.0);
  level.col(1) = Eigen::Vector3d(0.0, 0.0, -1.0);
  level.col(2) = Eigen::Vector3d(1.0, 0.0, 0.0);
  const Eigen::Matrix3d pitch =
      Eigen::AngleAxisd(-pitch_down, Eigen::Vector3d::UnitX())
          .toRotationMatrix();
  const Eigen::Matrix3d yaw_rot =
      Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  cam.rotation = yaw_rot * level * pitch;
  return cam;
}

Eigen::Vector3d CameraModel::PixelRay(double u, double v) const {
  const Eigen::Vector3d in_camera((u - cx) / fx, (v - cy) / fy, 1.0);
  return (rotation * in_camera).normalized();
}

std::optional<WorldPoint> RaycastPixelToGround(const CameraModel& camera,
                                               double u, double v,
                                               const HeightMap& terrain,
                                               double max_range) {
  if (!camera.InImage(u, v)) {
    throw InvalidArgument("RaycastPixelToGround: pixel outside the image");
  }
  const Eigen::Vector3d dir = camera.PixelRay(u, v);
  const double step = 0.5 * terrain.cell_size();
  auto clearance = [&](const WorldPoint& p) {
    return p.z() - terrain.HeightAt(p.x(), p.y());
  };

  WorldPoint prev = camera.position;
  double prev_clearance = clearance(prev);
  if (prev_clearance <= 0.0) return prev;
  const int steps = static_cast<int>(std::ceil(max_range / step));
  for (int i = 1; i <= steps; ++i) {
    const WorldPoint cur = camera.position + dir * (i * step);
    const double cur_clearance = clearance(cur);
    if (cur_clearance <= 0.0) {
      const double f = prev_clearance / (prev_clearance - cur_clearance);
      return prev + f * (cur - prev);
    }
    prev = cur;
    prev_clearance = cur_clearance;
  }
  return std::nullopt;
}

std::optional<double> ProjectHeadingToWorld(const CameraModel& camera, double u,
                                            double v, double image_heading,
                                            const HeightMap& terrain) {
  const auto foot = RaycastPixelToGround(camera, u, v, terrain);
  if (!foot) return std::nullopt;
  const double u2 = u + std::cos(image_heading);
  const double v2 = v - std::sin(image_heading);
  if (!camera.InImage(u2, v2)) return std::nullopt;
  const auto ahead = RaycastPixelToGround(camera, u2, v2, terrain);
  if (!ahead) return std::nullopt;
  const Eigen::Vector3d delta = *ahead - *foot;
  if (std::hypot(delta.x(), delta.y()) == 0.0) return std::nullopt;
  return NormalizeAngle(std::atan2(delta.y(), delta.x()));
}

}  // namespace mapping
}  // namespace skyframe
