//  Copyright 2026 The ssvec Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "ssvec/error.hpp"

namespace ssvec {

/// The one random source every trainer threads through. Its full state
/// (engine plus the normal sampler's cached deviate) is serializable so a
/// restored checkpoint continues with the exact same draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
  }

  double uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double normal() { return normal_(engine_); }

  std::string save_state() const {
    std::ostringstream out;
    out << engine_ << ' ' << normal_;
    return out.str();
  }

  void load_state(const std::string& state) {
    std::istringstream in(state);
    std::mt19937_64 engine;
    std::normal_distribution<double> normal;
    in >> engine >> normal;
    if (in.fail()) fail(ErrorCode::kCorrupt, "malformed rng state");
    engine_ = engine;
    normal_ = normal;
  }

  friend bool operator==(const Rng& a, const Rng& b) {
    return a.engine_ == b.engine_ && a.normal_ == b.normal_;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ssvec
