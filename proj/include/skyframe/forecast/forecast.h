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

#ifndef SKYFRAME_FORECAST_FORECAST_H_
#define SKYFRAME_FORECAST_FORECAST_H_

#include <istream>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "Eigen/Core"
#include "skyframe/core/types.h"
#include "skyframe/mapping/height_map.h"

namespace skyframe {
namespace forecast {

struct ActorMeasurement {
  double timestamp = 0.0;
  WorldPoint position = WorldPoint::Zero();
  std::optional<double> heading;
};

// Thrown for measurements older than the filter state.
class OutOfOrderMeasurement : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct PersonFilterParams {
  double accel_sigma = 1.0;          // white acceleration noise, m/s^2
  double measurement_sigma = 0.5;    // position noise, m
  double initial_speed_sigma = 3.0;  // velocity prior, m/s
};

// Constant-velocity Kalman filter over [x, y, vx, vy].
struct PersonFilterState {
  PersonFilterParams params;
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
  std::optional<double> time;  // empty until the first measurement
  double last_heading = 0.0;

  static PersonFilterState Initial(const PersonFilterParams& params);
};

struct VehicleFilterParams {
  double speed_sigma = 0.5;        // speed random walk, m/s per sqrt(s)
  double curvature_sigma = 0.05;   // curvature random walk, 1/m per sqrt(s)
  double measurement_sigma = 0.5;  // position noise, m
  double heading_sigma = 0.2;      // heading measurement noise, rad
  double initial_speed_sigma = 5.0;
  double initial_curvature_sigma = 0.2;
};

// Extended Kalman filter over [x, y, psi, v, kappa]: constant speed and
// constant curvature between measurements.
struct VehicleFilterState {
  VehicleFilterParams params;
  Eigen::Matrix<double, 5, 1> mean = Eigen::Matrix<double, 5, 1>::Zero();
  Eigen::Matrix<double, 5, 5> covariance = Eigen::Matrix<double, 5, 5>::Zero();
  std::optional<double> time;
  int measurement_count = 0;
  WorldPoint first_position = WorldPoint::Zero();

  static VehicleFilterState Initial(const VehicleFilterParams& params);
};

// Predicts to m.timestamp and corrects with the measured position. A
// measurement at the current filter time is a correction only. Throws
// OutOfOrderMeasurement for older timestamps.
PersonFilterState KfUpdate(const PersonFilterState& state,
                           const ActorMeasurement& m);

// Samples the constant-velocity motion on `grid` starting at `start_time`
// (defaults to the filter time). z is read from the terrain.
ActorForecast KfForecast(const PersonFilterState& state, const TimeGrid& grid,
                         const mapping::HeightMap& terrain,
                         std::optional<double> start_time = std::nullopt);

// The first measurement fixes the position, the second initializes heading
// and speed from the displacement; later ones run the EKF. The heading is
// corrected when the measurement carries one.
VehicleFilterState EkfUpdate(const VehicleFilterState& state,
                             const ActorMeasurement& m);

ActorForecast EkfForecast(const VehicleFilterState& state, const TimeGrid& grid,
                          const mapping::HeightMap& terrain,
                          std::optional<double> start_time = std::nullopt);

// Closed-form constant speed / curvature motion over `dt` and its Jacobian
// with respect to the state.
Eigen::Matrix<double, 5, 1> BicycleStep(const Eigen::Matrix<double, 5, 1>& s,
                                        double dt);
Eigen::Matrix<double, 5, 5> BicycleJacobian(
    const Eigen::Matrix<double, 5, 1>& s, double dt);

enum class ActorKind { kPerson, kVehicle };

// Filter selected by actor type.
class ActorTracker {
 public:
  explicit ActorTracker(ActorKind kind);
  ActorTracker(const PersonFilterParams& params);
  ActorTracker(const VehicleFilterParams& params);

  ActorKind kind() const;
  void Update(const ActorMeasurement& m);
  bool initialized() const;
  std::optional<double> time() const;
  ActorForecast Forecast(const TimeGrid& grid,
                         const mapping::HeightMap& terrain,
                         std::optional<double> start_time = std::nullopt) const;

 private:
  std::variant<PersonFilterState, VehicleFilterState> state_;
};

// "t,x,y,z[,psi]" rows; '#' comments and a header starting with 't' are
// skipped.
std::vector<ActorMeasurement> ReadMeasurementsCsv(std::istream& in);
// "t,x,y,z,heading" rows with a header.
void WriteForecastCsv(std::ostream& out, const ActorForecast& forecast);

}  // namespace forecast
}  // namespace skyframe

#endif  // SKYFRAME_FORECAST_FORECAST_H_
