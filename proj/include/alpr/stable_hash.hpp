/*
 Copyright 2026 The alpr-cascade Authors.
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <string_view>

namespace alpr {

/// Order-independent seeding: every random draw is keyed by what it is about
/// (seed, image, patch, stage), never by call order, so results do not depend
/// on scheduling.
class StableHash {
 public:
  explicit StableHash(std::uint64_t seed = 0) : state_(0xcbf29ce484222325ULL ^ mix(seed)) {}

  StableHash& add(std::string_view s) {
    for (unsigned char c : s) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return add(static_cast<std::uint64_t>(s.size()));
  }
  StableHash& add(std::uint64_t v) {
    state_ = mix(state_ ^ (v + 0x9e3779b97f4a7c15ULL));
    return *this;
  }
  StableHash& add(double v) { return add(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v)); }
  StableHash& add(int v) { return add(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }

  std::uint64_t value() const { return mix(state_); }
  std::mt19937_64 rng() const { return std::mt19937_64(value()); }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace alpr
