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

#include "skyframe/forecast/forecast.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "Eigen/Dense"

namespace skyframe {
namespace forecast {
namespace {

using Vector5d = Eigen::Matrix<double, 5, 1>;
using Matrix5d = Eigen::Matrix<double, 5, 5>;

constexpr double kStationarySpeed = 1e-6;

double ElapsedSince(const std::optional<double>& last, double timestamp) {
  if (!std::isfinite(timestamp)) {
    throw InvalidArgument("measurement timestamp is not finite");
  }
  if (!last) return 0.0;
  if (timestamp < *last) {
    throw OutOfOrderMeasurement(
        "measurement at t=" + std::to_string(timestamp) +
        " is older than the filter time " + std::to_string(*last));
  }
  return timestamp - *last;
}

// Kalman correction with a pseudo-inverse innovation covariance, so exact
// (zero-noise) measurements are handled. Joseph form keeps P symmetric PSD.
template <int N, int M>
void Correct(Eigen::Matrix<double, N, 1>* mean,
             Eigen::Matrix<double, N, N>* cov,
             const Eigen::Matrix<double, M, N>& h,
             const Eigen::Matrix<double, M, 1>& innovation,
             const Eigen::Matrix<double, M, M>& r) {
  const Eigen::Matrix<double, M, M> s = h * (*cov) * h.transpose() + r;
  const Eigen::Matrix<double, M, M> s_inv =
      Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<double, M, M>>(s)
          .pseudoInverse();
  const Eigen::Matrix<double, N, M> k = (*cov) * h.transpose() * s_inv;
  *mean += k * innovation;
  const Eigen::Matrix<double, N, N> i_kh =
      Eigen::Matrix<double, N, N>::Identity() - k * h;
  *cov = i_kh * (*cov) * i_kh.transpose() + k * r * k.transpose();
  *cov = 0.5 * (*cov + cov->transpose());
}

// sin(k s) / k and (1 - cos(k s)) / k with their k-derivatives, stable as
// k -> 0.
struct ArcTerms {
  double f1, f2, df1_dk, df2_dk;
};

ArcTerms Arc(double kappa, double s) {
  const double ks = kappa * s;
  if (std::abs(ks) < 1e-4) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double k2 = kappa * kappa;
    return {s - k2 * s3 / 6.0, kappa * s2 / 2.0 - k2 * kappa * s2 * s2 / 24.0,
            -kappa * s3 / 3.0 + k2 * kappa * s3 * s2 / 30.0,
            s2 / 2.0 - k2 * s2 * s2 / 8.0};
  }
  const double sn = std::sin(ks);
  const double cs = std::cos(ks);
  return {sn / kappa, (1.0 - cs) / kappa, (ks * cs - sn) / (kappa * kappa),
          (ks * sn - (1.0 - cs)) / (kappa * kappa)};
}

Pose TerrainPose(double x, double y, double heading,
                 const mapping::HeightMap& terrain) {
  return Pose{WorldPoint(x, y, terrain.HeightAt(x, y)),
              NormalizeAngle(heading)};
}

}  // namespace

PersonFilterState PersonFilterState::Initial(const PersonFilterParams& params) {
  if (!(params.accel_sigma >= 0.0) || !(params.measurement_sigma >= 0.0) ||
      !(params.initial_speed_sigma >= 0.0)) {
    throw InvalidArgument("PersonFilterParams: noise must be nonnegative");
  }
  PersonFilterState s;
  s.params = params;
  s.covariance.bottomRightCorner<2, 2>() = Eigen::Matrix2d::Identity() *
                                           params.initial_speed_sigma *
                                           params.initial_speed_sigma;
  return s;
}

PersonFilterState KfUpdate(const PersonFilterState& state,
                           const ActorMeasurement& m) {
  if (!m.position.allFinite()) {
    throw InvalidArgument("KfUpdate: non-finite measurement");
  }
  PersonFilterState next = state;
  const double dt = ElapsedSince(state.time, m.timestamp);
  const double r_var =
      state.params.measurement_sigma * state.params.measurement_sigma;
  if (m.heading) next.last_heading = NormalizeAngle(*m.heading);

  if (!state.time) {
    next.mean.head<2>() = m.position.head<2>();
    next.covariance.topLeftCorner<2, 2>() = Eigen::Matrix2d::Identity() * r_var;
    next.covariance.topRightCorner<2, 2>().setZero();
    next.covariance.bottomLeftCorner<2, 2>().setZero();
    next.time = m.timestamp;
    return next;
  }

  if (dt > 0.0) {
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 2) = dt;
    f(1, 3) = dt;
    const double q = state.params.accel_sigma * state.params.accel_sigma;
    const double dt2 = dt * dt;
    Eigen::Matrix4d qm = Eigen::Matrix4d::Zero();
    for (int a = 0; a < 2; ++a) {
      qm(a, a) = q * dt2 * dt2 / 4.0;
      qm(a, a + 2) = qm(a + 2, a) = q * dt2 * dt / 2.0;
      qm(a + 2, a + 2) = q * dt2;
    }
    next.mean = f * next.mean;
    next.covariance = f * next.covariance * f.transpose() + qm;
  }

  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const Eigen::Vector2d innovation = m.position.head<2>() - next.mean.head<2>();
  Correct<4, 2>(&next.mean, &next.covariance, h, innovation,
                Eigen::Matrix2d::Identity() * r_var);
  next.time = m.timestamp;
  return next;
}

ActorForecast KfForecast(const PersonFilterState& state, const TimeGrid& grid,
                         const mapping::HeightMap& terrain,
                         std::optional<double> start_time) {
  const double t0 = state.time.value_or(0.0);
  const double start = start_time.value_or(t0);
  const Eigen::Vector2d vel = state.mean.tail<2>();
  const double heading = vel.norm() > kStationarySpeed
                             ? std::atan2(vel.y(), vel.x())
                             : state.last_heading;
  std::vector<Pose> poses;
  poses.reserve(grid.sample_count());
  for (int k = 0; k < grid.sample_count(); ++k) {
    const double t = start + grid.TimeAt(k) - t0;
    const Eigen::Vector2d p = state.mean.head<2>() + vel * t;
    poses.push_back(TerrainPose(p.x(), p.y(), heading, terrain));
  }
  return ActorForecast(start, grid, std::move(poses));
}

Vector5d BicycleStep(const Vector5d& s, double dt) {
  const double psi = s(2);
  const double v = s(3);
  const double kappa = s(4);
  const double arc = v * dt;
  const ArcTerms a = Arc(kappa, arc);
  const double c = std::cos(psi);
  const double sn = std::sin(psi);
  Vector5d out = s;
  out(0) = s(0) + c * a.f1 - sn * a.f2;
  out(1) = s(1) + sn * a.f1 + c * a.f2;
  out(2) = psi + kappa * arc;
  return out;
}

Matrix5d BicycleJacobian(const Vector5d& s, double dt) {
  const double psi = s(2);
  const double v = s(3);
  const double kappa = s(4);
  const double arc = v * dt;
  const ArcTerms a = Arc(kappa, arc);
  const double c = std::cos(psi);
  const double sn = std::sin(psi);
  const double end = psi + kappa * arc;
  Matrix5d j = Matrix5d::Identity();
  j(0, 2) = -sn * a.f1 - c * a.f2;
  j(1, 2) = c * a.f1 - sn * a.f2;
  j(0, 3) = dt * std::cos(end);
  j(1, 3) = dt * std::sin(end);
  j(2, 3) = kappa * dt;
  j(0, 4) = c * a.df1_dk - sn * a.df2_dk;
  j(1, 4) = sn * a.df1_dk + c * a.df2_dk;
  j(2, 4) = arc;
  return j;
}

VehicleFilterState VehicleFilterState::Initial(
    const VehicleFilterParams& params) {
  if (!(params.speed_sigma >= 0.0) || !(params.curvature_sigma >= 0.0) ||
      !(params.measurement_sigma >= 0.0) || !(params.heading_sigma >= 0.0)) {
    throw InvalidArgument("VehicleFilterParams: noise must be nonnegative");
  }
  VehicleFilterState s;
  s.params = params;
  return s;
}

VehicleFilterState EkfUpdate(const VehicleFilterState& state,
                             const ActorMeasurement& m) {
  if (!m.position.allFinite()) {
    throw InvalidArgument("EkfUpdate: non-finite measurement");
  }
  const VehicleFilterParams& p = state.params;
  const double dt = ElapsedSince(state.time, m.timestamp);
  const double r_var = p.measurement_sigma * p.measurement_sigma;
  const double k_var = p.initial_curvature_sigma * p.initial_curvature_sigma;
  VehicleFilterState next = state;
  next.time = m.timestamp;

  if (state.measurement_count == 0) {
    next.mean << m.position.x(), m.position.y(),
        m.heading ? NormalizeAngle(*m.heading) : 0.0, 0.0, 0.0;
    next.covariance.setZero();
    next.covariance.diagonal() << r_var, r_var,
        std::numbers::pi * std::numbers::pi,
        p.initial_speed_sigma * p.initial_speed_sigma, k_var;
    next.first_position = m.position;
    next.measurement_count = 1;
    return next;
  }

  if (state.measurement_count == 1 && dt > 0.0) {
    // Two-point start: straight-line heading and speed, zero curvature.
    const Eigen::Vector2d delta = m.position.head<2>() - state.mean.head<2>();
    const double dist = delta.norm();
    double heading = state.mean(2);
    if (dist > 1e-9) heading = std::atan2(delta.y(), delta.x());
    if (m.heading) heading = NormalizeAngle(*m.heading);
    next.mean << m.position.x(), m.position.y(), heading, dist / dt, 0.0;
    const double heading_var =
        m.heading ? p.heading_sigma * p.heading_sigma
                  : (dist > 1e-9 ? std::min(std::numbers::pi * std::numbers::pi,
                                            2.0 * r_var / (dist * dist))
                                 : std::numbers::pi * std::numbers::pi);
    next.covariance.setZero();
    next.covariance.diagonal() << r_var, r_var, heading_var,
        2.0 * r_var / (dt * dt) + p.speed_sigma * p.speed_sigma * dt, k_var;
    next.measurement_count = 2;
    return next;
  }

  if (dt > 0.0) {
    const Matrix5d f = BicycleJacobian(state.mean, dt);
    next.mean = BicycleStep(state.mean, dt);
    Matrix5d q = Matrix5d::Zero();
    q(3, 3) = p.speed_sigma * p.speed_sigma * dt;
    q(4, 4) = p.curvature_sigma * p.curvature_sigma * dt;
    next.covariance = f * state.covariance * f.transpose() + q;
  }

  if (m.heading) {
    Eigen::Matrix<double, 3, 5> h = Eigen::Matrix<double, 3, 5>::Zero();
    h(0, 0) = h(1, 1) = h(2, 2) = 1.0;
    Eigen::Vector3d innovation;
    innovation << m.position.x() - next.mean(0), m.position.y() - next.mean(1),
        NormalizeAngle(*m.heading - next.mean(2));
    Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
    r.diagonal() << r_var, r_var, p.heading_sigma * p.heading_sigma;
    Correct<5, 3>(&next.mean, &next.covariance, h, innovation, r);
  } else {
    Eigen::Matrix<double, 2, 5> h = Eigen::Matrix<double, 2, 5>::Zero();
    h(0, 0) = h(1, 1) = 1.0;
    const Eigen::Vector2d innovation =
        m.position.head<2>() - next.mean.head<2>();
    Correct<5, 2>(&next.mean, &next.covariance, h, innovation,
                  Eigen::Matrix2d::Identity() * r_var);
  }
  next.mean(2) = NormalizeAngle(next.mean(2));
  next.mean(3) = std::max(0.0, next.mean(3));
  ++next.measurement_count;
  return next;
}

ActorForecast EkfForecast(const VehicleFilterState& state, const TimeGrid& grid,
                          const mapping::HeightMap& terrain,
                          std::optional<double> start_time) {
  const double t0 = state.time.value_or(0.0);
  const double start = start_time.value_or(t0);
  std::vector<Pose> poses;
  poses.reserve(grid.sample_count());
  for (int k = 0; k < grid.sample_count(); ++k) {
    const double t = start + grid.TimeAt(k) - t0;
    const Vector5d s = BicycleStep(state.mean, t);
    poses.push_back(TerrainPose(s(0), s(1), s(2), terrain));
  }
  return ActorForecast(start, grid, std::move(poses));
}

ActorTracker::ActorTracker(ActorKind kind) {
  if (kind == ActorKind::kPerson) {
    state_ = PersonFilterState::Initial(PersonFilterParams{});
  } else {
    state_ = VehicleFilterState::Initial(VehicleFilterParams{});
  }
}

ActorTracker::ActorTracker(const PersonFilterParams& params)
    : state_(PersonFilterState::Initial(params)) {}

ActorTracker::ActorTracker(const VehicleFilterParams& params)
    : state_(VehicleFilterState::Initial(params)) {}

ActorKind ActorTracker::kind() const {
  return std::holds_alternative<PersonFilterState>(state_)
             ? ActorKind::kPerson
             : ActorKind::kVehicle;
}

void ActorTracker::Update(const ActorMeasurement& m) {
  if (auto* person = std::get_if<PersonFilterState>(&state_)) {
    *person = KfUpdate(*person, m);
  } else {
    auto& vehicle = std::get<VehicleFilterState>(state_);
    vehicle = EkfUpdate(vehicle, m);
  }
}

std::optional<double> ActorTracker::time() const {
  return std::visit([](const auto& s) { return s.time; }, state_);
}

bool ActorTracker::initialized() const { return time().has_value(); }

ActorForecast ActorTracker::Forecast(const TimeGrid& grid,
                                     const mapping::HeightMap& terrain,
                                     std::optional<double> start_time) const {
  if (!initialized()) {
    throw InvalidArgument("ActorTracker: no measurement received yet");
  }
  if (const auto* person = std::get_if<PersonFilterState>(&state_)) {
    return KfForecast(*person, grid, terrain, start_time);
  }
  return EkfForecast(std::get<VehicleFilterState>(state_), grid, terrain,
                     start_time);
}

std::vector<ActorMeasurement> ReadMeasurementsCsv(std::istream& in) {
  std::vector<ActorMeasurement> out;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line_number == 1 && line[first] == 't') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    ActorMeasurement m;
    if (!(fields >> m.timestamp >> m.position.x() >> m.position.y() >>
          m.position.z())) {
      throw InvalidArgument("measurement CSV: bad record on line " +
                            std::to_string(line_number));
    }
    double psi = 0.0;
    if (fields >> psi) m.heading = psi;
    out.push_back(m);
  }
  return out;
}

void WriteForecastCsv(std::ostream& out, const ActorForecast& forecast) {
  out << "t,x,y,z,heading\n";
  for (int k = 0; k < forecast.grid.sample_count(); ++k) {
    const Pose& p = forecast.poses[k];
    out << forecast.start_time + forecast.grid.TimeAt(k) << ","
        << p.position.x() << "," << p.position.y() << "," << p.position.z()
        << "," << p.heading << "\n";
  }
}

}  // namespace forecast
}  // namespace skyframe
