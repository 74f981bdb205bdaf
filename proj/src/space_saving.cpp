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

#include "ssvec/space_saving.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "ssvec/error.hpp"

namespace ssvec {

SpaceSavingSketch::SpaceSavingSketch(std::size_t capacity) {
  require(capacity >= 1, "sketch capacity must be positive");
  require(capacity < kNil, "sketch capacity too large");
  words_.resize(capacity);
  counts_.assign(capacity, 0);
  slot_bucket_.assign(capacity, kNil);
  slot_prev_.assign(capacity, kNil);
  slot_next_.assign(capacity, kNil);
  // One spare: increment() links the new bucket before freeing the old one.
  buckets_.reserve(capacity + 1);
  index_.reserve(capacity);
}

std::uint32_t SpaceSavingSketch::new_bucket(std::uint64_t count,
                                            std::uint32_t after) {
  std::uint32_t b;
  if (!free_buckets_.empty()) {
    b = free_buckets_.back();
    free_buckets_.pop_back();
    buckets_[b] = Bucket{};
  } else {
    b = static_cast<std::uint32_t>(buckets_.size());
    buckets_.emplace_back();
  }
  buckets_[b].count = count;
  if (after == kNil) {
    buckets_[b].next = min_bucket_;
    if (min_bucket_ != kNil) buckets_[min_bucket_].prev = b;
    min_bucket_ = b;
  } else {
    const std::uint32_t next = buckets_[after].next;
    buckets_[b].prev = after;
    buckets_[b].next = next;
    buckets_[after].next = b;
    if (next != kNil) buckets_[next].prev = b;
  }
  ++live_buckets_;
  return b;
}

void SpaceSavingSketch::free_bucket(std::uint32_t b) {
  const Bucket& bucket = buckets_[b];
  if (bucket.prev != kNil) {
    buckets_[bucket.prev].next = bucket.next;
  } else {
    min_bucket_ = bucket.next;
  }
  if (bucket.next != kNil) buckets_[bucket.next].prev = bucket.prev;
  free_buckets_.push_back(b);
  --live_buckets_;
}

void SpaceSavingSketch::unlink_slot(Slot s) {
  Bucket& bucket = buckets_[slot_bucket_[s]];
  const std::uint32_t prev = slot_prev_[s];
  const std::uint32_t next = slot_next_[s];
  if (prev != kNil) slot_next_[prev] = next; else bucket.head = next;
  if (next != kNil) slot_prev_[next] = prev; else bucket.tail = prev;
  slot_prev_[s] = slot_next_[s] = kNil;
  slot_bucket_[s] = kNil;
}

void SpaceSavingSketch::append_slot(std::uint32_t b, Slot s) {
  Bucket& bucket = buckets_[b];
  slot_prev_[s] = bucket.tail;
  slot_next_[s] = kNil;
  if (bucket.tail != kNil) slot_next_[bucket.tail] = s; else bucket.head = s;
  bucket.tail = s;
  slot_bucket_[s] = b;
}

void SpaceSavingSketch::increment(Slot s) {
  const std::uint64_t target_count = counts_[s] + 1;
  const std::uint32_t current = slot_bucket_[s];
  std::uint32_t target;
  if (current == kNil) {
    if (min_bucket_ != kNil && buckets_[min_bucket_].count == target_count) {
      target = min_bucket_;
    } else {
      target = new_bucket(target_count, kNil);
    }
  } else {
    const std::uint32_t next = buckets_[current].next;
    if (next != kNil && buckets_[next].count == target_count) {
      target = next;
    } else {
      target = new_bucket(target_count, current);
    }
    unlink_slot(s);
    if (buckets_[current].head == kNil) free_bucket(current);
  }
  append_slot(target, s);
  counts_[s] = target_count;
}

ObserveOutcome SpaceSavingSketch::observe(std::string_view word) {
  require(!word.empty(), "cannot observe an empty word");
  ObserveOutcome outcome;
  if (auto it = index_.find(word); it != index_.end()) {
    outcome.slot = it->second;
    outcome.kind = ObserveKind::kHit;
  } else if (occupied_ < words_.size()) {
    const auto s = static_cast<Slot>(occupied_++);
    words_[s] = std::string(word);
    index_.emplace(words_[s], s);
    outcome.slot = s;
    outcome.kind = ObserveKind::kFilled;
  } else {
    const Slot s = buckets_[min_bucket_].head;
    index_.erase(words_[s]);
    outcome.ejected = std::move(words_[s]);
    words_[s] = std::string(word);
    index_.emplace(words_[s], s);
    outcome.slot = s;
    outcome.kind = ObserveKind::kReplaced;
  }
  increment(outcome.slot);
  ++observed_;
  return outcome;
}

std::optional<Slot> SpaceSavingSketch::slot_of(std::string_view word) const {
  if (auto it = index_.find(word); it != index_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::uint64_t> SpaceSavingSketch::count(
    std::string_view word) const {
  if (auto it = index_.find(word); it != index_.end()) {
    return counts_[it->second];
  }
  return std::nullopt;
}

std::uint64_t SpaceSavingSketch::min_count() const {
  return min_bucket_ == kNil ? 0 : buckets_[min_bucket_].count;
}

std::vector<std::pair<std::string, std::uint64_t>> SpaceSavingSketch::items()
    const {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  out.reserve(occupied_);
  for (std::size_t s = 0; s < occupied_; ++s) {
    out.emplace_back(words_[s], counts_[s]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::vector<SketchEntry> SpaceSavingSketch::entries() const {
  std::vector<SketchEntry> out;
  out.reserve(occupied_);
  for (std::uint32_t b = min_bucket_; b != kNil; b = buckets_[b].next) {
    for (std::uint32_t s = buckets_[b].head; s != kNil; s = slot_next_[s]) {
      out.push_back({s, words_[s], counts_[s]});
    }
  }
  return out;
}

SpaceSavingSketch SpaceSavingSketch::restore(
    std::size_t capacity, std::uint64_t observed,
    const std::vector<SketchEntry>& entries) {
  if (capacity == 0 || capacity >= kNil) {
    fail(ErrorCode::kCorrupt, "sketch capacity out of range");
  }
  if (entries.size() > capacity) {
    fail(ErrorCode::kCorrupt, "more sketch entries than slots");
  }
  SpaceSavingSketch sketch(capacity);
  std::uint64_t sum = 0;
  std::uint32_t last = kNil;
  for (const auto& e : entries) {
    // Slots fill in arrival order and are never vacated, so the occupied
    // slots are exactly 0..size-1.
    if (e.slot >= entries.size() || e.word.empty() || e.count == 0 ||
        sketch.slot_bucket_[e.slot] != kNil ||
        sketch.index_.count(e.word) != 0) {
      fail(ErrorCode::kCorrupt, "inconsistent sketch entry");
    }
    if (last != kNil && sketch.buckets_[last].count > e.count) {
      fail(ErrorCode::kCorrupt, "sketch entries out of order");
    }
    if (last == kNil || sketch.buckets_[last].count != e.count) {
      last = sketch.new_bucket(e.count, last);
    }
    sketch.words_[e.slot] = e.word;
    sketch.counts_[e.slot] = e.count;
    sketch.index_.emplace(e.word, e.slot);
    sketch.append_slot(last, e.slot);
    if (sum > std::numeric_limits<std::uint64_t>::max() - e.count) {
      fail(ErrorCode::kCorrupt, "sketch count overflow");
    }
    sum += e.count;
  }
  if (sum != observed) {
    fail(ErrorCode::kCorrupt, "sketch counts do not sum to observed");
  }
  sketch.occupied_ = entries.size();
  sketch.observed_ = observed;
  return sketch;
}

void SpaceSavingSketch::write_tsv(std::ostream& out) const {
  out << "#space-saving\t" << capacity() << '\t' << observed_ << '\n';
  for (const auto& e : entries()) {
    if (e.word.find_first_of("\t\n") != std::string::npos) {
      fail(ErrorCode::kInvalidArgument, "word not representable in TSV");
    }
    out << e.slot << '\t' << e.word << '\t' << e.count << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "write failed");
}

SpaceSavingSketch SpaceSavingSketch::read_tsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kFormat, "empty sketch TSV");
  std::istringstream header(line);
  std::string tag;
  std::size_t capacity = 0;
  std::uint64_t observed = 0;
  if (!std::getline(header, tag, '\t') || tag != "#space-saving" ||
      !(header >> capacity >> observed)) {
    fail(ErrorCode::kFormat, "bad sketch TSV header");
  }
  std::vector<SketchEntry> entries;
  while (std::getline(in, line)) {
    const auto t1 = line.find('\t');
    const auto t2 = line.rfind('\t');
    if (t1 == std::string::npos || t1 == t2) {
      fail(ErrorCode::kFormat, "bad sketch TSV row");
    }
    SketchEntry e;
    try {
      std::size_t used = 0;
      const auto slot = std::stoull(line.substr(0, t1), &used);
      if (used != t1 || slot >= kNil) throw std::out_of_range("slot");
      e.slot = static_cast<Slot>(slot);
      const auto count_text = line.substr(t2 + 1);
      e.count = std::stoull(count_text, &used);
      if (used != count_text.size()) throw std::invalid_argument("count");
    } catch (const std::logic_error&) {
      fail(ErrorCode::kFormat, "bad sketch TSV row");
    }
    e.word = line.substr(t1 + 1, t2 - t1 - 1);
    entries.push_back(std::move(e));
  }
  return restore(capacity, observed, entries);
}

bool SpaceSavingSketch::check_invariants() const {
  if (index_.size() != occupied_) return false;
  std::uint64_t sum = 0;
  for (std::size_t s = 0; s < words_.size(); ++s) {
    if (s < occupied_) {
      if (counts_[s] == 0 || words_[s].empty()) return false;
      auto it = index_.find(words_[s]);
      if (it == index_.end() || it->second != s) return false;
      if (slot_bucket_[s] == kNil ||
          buckets_[slot_bucket_[s]].count != counts_[s]) {
        return false;
      }
      sum += counts_[s];
    } else if (counts_[s] != 0 || slot_bucket_[s] != kNil) {
      return false;
    }
  }
  if (sum != observed_) return false;
  std::size_t listed = 0;
  std::size_t buckets = 0;
  std::uint64_t prev_count = 0;
  for (std::uint32_t b = min_bucket_; b != kNil; b = buckets_[b].next) {
    if (buckets_[b].count <= prev_count || buckets_[b].head == kNil) {
      return false;
    }
    prev_count = buckets_[b].count;
    ++buckets;
    for (std::uint32_t s = buckets_[b].head; s != kNil; s = slot_next_[s]) {
      if (slot_bucket_[s] != b) return false;
      ++listed;
    }
  }
  return listed == occupied_ && buckets == live_buckets_ &&
         buckets_.size() <= words_.size() + 1;
}

}  // namespace ssvec
