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

#ifndef SKYFRAME_CORE_SEED_H_
#define SKYFRAME_CORE_SEED_H_

#include <cstdint>
#include <string_view>

namespace skyframe {

// 64-bit FNV-1a hash.
constexpr std::uint64_t Fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// One SplitMix64 output for state `x`.
constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the component named `tag` under the run seed `seed`.
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view tag) {
  return SplitMix64(seed ^ Fnv1a(tag));
}

}  // namespace skyframe

#endif  // SKYFRAME_CORE_SEED_H_
