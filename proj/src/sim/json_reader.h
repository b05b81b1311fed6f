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

#ifndef SKYFRAME_SRC_SIM_JSON_READER_H_
#define SKYFRAME_SRC_SIM_JSON_READER_H_

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "json.hpp"
#include "skyframe/core/types.h"

namespace skyframe {
namespace sim {
namespace internal {

// Reads keys from one JSON object and rejects the ones nobody asked for.
class Reader {
 public:
  Reader(const nlohmann::json& object, std::string path)
      : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) {
      throw InvalidArgument("config: " + path_ + " must be an object");
    }
  }

  template <typename T>
  void Get(const std::string& key, T* out) {
    if (const nlohmann::json* v = Find(key)) *out = v->get<T>();
  }

  void Get(const std::string& key, Eigen::Vector2d* out) {
    if (const nlohmann::json* v = Find(key)) *out = Vec<2>(*v, key);
  }

  void Get(const std::string& key, Eigen::Vector3d* out) {
    if (const nlohmann::json* v = Find(key)) *out = Vec<3>(*v, key);
  }

  void Get(const std::string& key, std::optional<Eigen::Vector3d>* out) {
    if (const nlohmann::json* v = Find(key)) {
      if (v->is_null()) {
        out->reset();
      } else {
        *out = Vec<3>(*v, key);
      }
    }
  }

  void Get(const std::string& key, std::vector<Eigen::Vector2d>* out) {
    if (const nlohmann::json* v = Find(key)) {
      if (!v->is_array()) Fail(key, "must be an array of [x, y]");
      out->clear();
      for (const nlohmann::json& e : *v) out->push_back(Vec<2>(e, key));
    }
  }

  std::optional<Reader> Child(const std::string& key) {
    if (const nlohmann::json* v = Find(key)) {
      return Reader(*v, path_ + "." + key);
    }
    return std::nullopt;
  }

  // Marks a key the caller reads by other means.
  void Skip(const std::string& key) { seen_.insert(key); }

  void Finish() const {
    for (const auto& item : object_.items()) {
      if (!seen_.count(item.key())) {
        throw InvalidArgument("config: unknown key " + path_ + "." +
                              item.key());
      }
    }
  }

 private:
  const nlohmann::json* Find(const std::string& key) {
    seen_.insert(key);
    const auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  template <int N>
  Eigen::Matrix<double, N, 1> Vec(const nlohmann::json& v,
                                  const std::string& key) {
    if (!v.is_array() || v.size() != N) {
      Fail(key, "must be an array of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) out[i] = v[i].get<double>();
    return out;
  }

  [[noreturn]] void Fail(const std::string& key, const std::string& what) {
    throw InvalidArgument("config: " + path_ + "." + key + " " + what);
  }

  const nlohmann::json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace internal
}  // namespace sim
}  // namespace skyframe

#endif  // SKYFRAME_SRC_SIM_JSON_READER_H_
