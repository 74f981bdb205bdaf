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

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "ssvec/error.hpp"
#include "ssvec/rng.hpp"
#include "ssvec/space_saving.hpp"

namespace ssvec {

/// Uniform fixed-capacity sample of a stream of slot indices (Vitter's
/// Algorithm R). Drawing from it gives the unsmoothed empirical negative
/// sampling distribution. Storage grows up to capacity and no further.
class Reservoir {
 public:
  explicit Reservoir(std::uint64_t capacity) : capacity_(capacity) {
    require(capacity >= 1, "reservoir capacity must be positive");
  }

  /// Returns whether the stored sample changed.
  bool observe(Slot value, Rng& rng) {
    ++seen_;
    if (values_.size() < capacity_) {
      values_.push_back(value);
      return true;
    }
    const std::uint64_t k = rng.uniform_index(seen_);
    if (k < capacity_) {
      values_[k] = value;
      return true;
    }
    return false;
  }

  Slot draw(Rng& rng) const {
    if (values_.empty()) fail(ErrorCode::kInvalidArgument, "empty reservoir");
    return values_[rng.uniform_index(values_.size())];
  }

  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t seen() const { return seen_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<const Slot> values() const { return values_; }

  /// Rebuilds a reservoir from persisted state; throws kCorrupt when the
  /// stored size disagrees with min(seen, capacity).
  static Reservoir restore(std::uint64_t capacity, std::uint64_t seen,
                           std::vector<Slot> values) {
    if (capacity == 0 ||
        values.size() != std::min<std::uint64_t>(seen, capacity)) {
      fail(ErrorCode::kCorrupt, "inconsistent reservoir state");
    }
    Reservoir r(capacity);
    r.seen_ = seen;
    r.values_ = std::move(values);
    return r;
  }

 private:
  std::uint64_t capacity_;
  std::uint64_t seen_ = 0;
  std::vector<Slot> values_;
};

}  // namespace ssvec
