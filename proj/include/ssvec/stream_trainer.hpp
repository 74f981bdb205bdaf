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

// One-pass, bounded-memory SGNS training. The vocabulary is a space-saving
// sketch, negatives come from a reservoir of slot indices, and embeddings
// and learning rates are indexed by sketch slot.

#pragma once

#include <cstdint>
#include <functional>
#include <istream>

#include "ssvec/corpus.hpp"
#include "ssvec/reservoir.hpp"
#include "ssvec/rng.hpp"
#include "ssvec/sgns.hpp"
#include "ssvec/space_saving.hpp"

namespace ssvec {

struct TrainerConfig {
  std::uint64_t vocab_capacity = 100'000;         // K
  std::uint64_t reservoir_capacity = 100'000'000;  // N
  std::uint32_t negatives = 5;                     // S
  std::uint32_t dim = 100;                         // D
  std::uint32_t context_radius = 2;                // C
  double subsample_threshold = 1e-3;               // delta
  bool dynamic_windows = true;
  LearningSchedule schedule;
  std::uint64_t seed = 1;
  std::uint64_t max_sentence_len = kDefaultMaxSentenceLen;

  /// Throws kInvalidArgument when a field is out of range.
  void validate() const;

  friend bool operator==(const TrainerConfig&, const TrainerConfig&) = default;
};

struct StreamStats {
  std::uint64_t sentences = 0;
  std::uint64_t tokens = 0;
  std::uint64_t retained_tokens = 0;
  std::uint64_t ejections = 0;
  std::uint64_t contexts_trained = 0;
  std::uint64_t contexts_skipped = 0;

  friend bool operator==(const StreamStats&, const StreamStats&) = default;
};

struct StreamModel {
  explicit StreamModel(const TrainerConfig& config);
  StreamModel(TrainerConfig config, SpaceSavingSketch sketch,
              Reservoir negatives, EmbeddingTable table,
              SlotLearningState learning, Rng rng, StreamStats stats);

  TrainerConfig config;
  SpaceSavingSketch sketch;
  Reservoir negatives;
  EmbeddingTable table;
  SlotLearningState learning;
  Rng rng;
  StreamStats stats;
};

/// Keeps tokens the sketch has never seen, and keeps a resident token with
/// relative frequency f = count / observed with probability
/// min(1, sqrt(delta / f)).
Sentence subsample_sentence(const StreamModel& model, const Sentence& sentence,
                            Rng& rng);

/// Context radius for one window: uniform on 1..C with dynamic windows,
/// otherwise C.
std::uint32_t effective_radius(const TrainerConfig& config, Rng& rng);

/// Subsamples the sentence, inserts every retained token into the sketch
/// (resetting any slot whose word is ejected) and its slot into the
/// reservoir, then trains each full window whose words are all resident.
/// Windows are centred on positions C..J'-C-1 of the subsampled sentence,
/// so a sentence shorter than 2C+1 only feeds the sketch and reservoir.
void train_sentence(StreamModel& model, const Sentence& sentence, Rng& rng);

struct ProgressOptions {
  std::uint64_t interval_tokens = 0;  // 0 disables
  std::function<void(const StreamModel&)> callback;
};

/// Trains on each sentence of `in` once, in order, using the model's own
/// rng. Can be called repeatedly to continue training.
StreamStats train_stream(StreamModel& model, std::istream& in,
                         const ProgressOptions& progress = {});

}  // namespace ssvec
