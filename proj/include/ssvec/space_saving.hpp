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
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ssvec {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using Slot = std::uint32_t;

enum class ObserveKind { kHit, kFilled, kReplaced };

struct ObserveOutcome {
  Slot slot = 0;
  ObserveKind kind = ObserveKind::kHit;
  std::optional<std::string> ejected;  // set iff kind == kReplaced
};

/// One entry of the sketch in "replay order": ascending count, and within a
/// count, least recently updated first. Re-observing entries in this order
/// via SpaceSavingSketch::restore rebuilds an identical sketch.
struct SketchEntry {
  Slot slot;
  std::string word;
  std::uint64_t count;
};

/// Space-saving top-K counter over word types.
///
/// Words are assigned to slots 0..K-1 in arrival order; once full, a new
/// word takes over the minimum-count slot (the least recently updated one
/// among ties) and inherits its count plus one. Any resident word's count
/// over-estimates its true count by at most observed()/K, and every word
/// whose true count exceeds observed()/K is resident.
///
/// Backed by a stream-summary: count buckets in a doubly linked list, each
/// bucket holding its slots in update order, so observe() is O(1).
class SpaceSavingSketch {
 public:
  explicit SpaceSavingSketch(std::size_t capacity);

  ObserveOutcome observe(std::string_view word);

  std::optional<Slot> slot_of(std::string_view word) const;
  std::optional<std::uint64_t> count(std::string_view word) const;

  /// Smallest count over occupied slots, 0 when empty.
  std::uint64_t min_count() const;

  /// Occupied slots as (word, count), descending count, ties by word.
  std::vector<std::pair<std::string, std::uint64_t>> items() const;

  /// Occupied slots in replay order (see SketchEntry).
  std::vector<SketchEntry> entries() const;

  /// Rebuilds a sketch from replay-ordered entries. Throws kCorrupt when the
  /// entries are inconsistent with `capacity` and `observed`.
  static SpaceSavingSketch restore(std::size_t capacity, std::uint64_t observed,
                                   const std::vector<SketchEntry>& entries);

  std::size_t capacity() const { return words_.size(); }
  std::size_t size() const { return occupied_; }
  std::uint64_t observed() const { return observed_; }

  const std::string& word_at(Slot slot) const { return words_[slot]; }
  std::uint64_t count_at(Slot slot) const { return counts_[slot]; }
  bool occupied(Slot slot) const { return slot < occupied_; }

  /// TSV: a header "#space-saving\t<K>\t<observed>" then slot, word, count
  /// rows in replay order.
  void write_tsv(std::ostream& out) const;
  static SpaceSavingSketch read_tsv(std::istream& in);

  /// Number of live count buckets; bounded by size().
  std::size_t bucket_count() const { return live_buckets_; }

  /// Full structural self-check, used by tests.
  bool check_invariants() const;

 private:
  static constexpr std::uint32_t kNil = 0xFFFFFFFFu;

  struct Bucket {
    std::uint64_t count = 0;
    std::uint32_t prev = kNil;  // towards smaller counts
    std::uint32_t next = kNil;
    std::uint32_t head = kNil;  // least recently updated slot
    std::uint32_t tail = kNil;
  };

  std::uint32_t new_bucket(std::uint64_t count, std::uint32_t after);
  void free_bucket(std::uint32_t b);
  void unlink_slot(Slot s);
  void append_slot(std::uint32_t b, Slot s);
  // Moves slot s (currently in bucket of count c, or unbucketed when fresh)
  // into the bucket for c + 1.
  void increment(Slot s);

  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint32_t> slot_bucket_;
  std::vector<std::uint32_t> slot_prev_;
  std::vector<std::uint32_t> slot_next_;
  std::vector<Bucket> buckets_;
  std::vector<std::uint32_t> free_buckets_;
  std::uint32_t min_bucket_ = kNil;
  std::size_t live_buckets_ = 0;
  std::unordered_map<std::string, Slot, StringHash, std::equal_to<>> index_;
  std::size_t occupied_ = 0;
  std::uint64_t observed_ = 0;
};

}  // namespace ssvec
