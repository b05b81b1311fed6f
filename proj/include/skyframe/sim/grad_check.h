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

#ifndef SKYFRAME_SIM_GRAD_CHECK_H_
#define SKYFRAME_SIM_GRAD_CHECK_H_

#include <cstdint>
#include <string>

namespace skyframe {
namespace sim {

struct GradCheckConfig {
  std::uint64_t seed = 7;
  int instances = 20;
  int spheres = 20;
  double horizon = 10.0;
  int samples = 16;
  double quadratic_step = 1e-4;  // finite-difference step, smooth terms
  double field_step = 1e-6;      // finite-difference step, map terms
  double target_height = 0.5;

  void Validate() const;
};

struct TermCheck {
  double max_relative_error = 0.0;
  int nonzero = 0;  // instances where the term value was positive
};

struct GradCheckResult {
  int instances = 0;
  TermCheck smoothness;
  TermCheck obstacle;
  TermCheck occlusion;
  TermCheck shot;
};

// Compares the analytic gradient of each cost term with central finite
// differences on random camera paths through seeded sphere worlds. The
// error is the Frobenius-norm relative error per instance; the maximum
// over instances is reported.
GradCheckResult RunGradCheck(const GradCheckConfig& config);

// JSON with the GradCheckConfig field names plus "schema_version". Unknown
// keys are errors; missing keys keep their defaults.
GradCheckConfig GradCheckConfigFromJson(const std::string& text);
std::string GradCheckConfigToJson(const GradCheckConfig& config);

std::string GradCheckToJson(const GradCheckResult& result);

}  // namespace sim
}  // namespace skyframe

#endif  // SKYFRAME_SIM_GRAD_CHECK_H_
