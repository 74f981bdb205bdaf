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

#include "ssvec/stream_trainer.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "ssvec/error.hpp"

namespace ssvec {

void TrainerConfig::validate() const {
  require(vocab_capacity >= 1 && vocab_capacity < 0xFFFFFFFFull,
          "vocabulary size must be in [1, 2^32 - 1)");
  require(reservoir_capacity >= 1, "reservoir size must be positive");
  require(dim >= 1, "embedding dimension must be positive");
  require(context_radius >= 1, "context window must be positive");
  require(std::isfinite(subsample_threshold) && subsample_threshold > 0,
          "subsampling threshold must be positive");
  require(max_sentence_len >= 1, "max sentence length must be positive");
  schedule.validate();
}

namespace {

const TrainerConfig& validated(const TrainerConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

StreamModel::StreamModel(const TrainerConfig& cfg)
    : config(validated(cfg)),
      sketch(cfg.vocab_capacity),
      negatives(cfg.reservoir_capacity),
      rng(cfg.seed) {
  table = EmbeddingTable::standard_normal(cfg.vocab_capacity, cfg.dim, rng);
  learning = SlotLearningState(cfg.vocab_capacity, cfg.schedule);
}

StreamModel::StreamModel(TrainerConfig cfg, SpaceSavingSketch sk,
                         Reservoir res, EmbeddingTable tab,
                         SlotLearningState learn, Rng r, StreamStats st)
    : config(std::move(cfg)),
      sketch(std::move(sk)),
      negatives(std::move(res)),
      table(std::move(tab)),
      learning(std::move(learn)),
      rng(std::move(r)),
      stats(st) {}

Sentence subsample_sentence(const StreamModel& model, const Sentence& sentence,
                            Rng& rng) {
  Sentence kept;
  kept.tokens.reserve(sentence.tokens.size());
  const double observed = static_cast<double>(model.sketch.observed());
  const double threshold = model.config.subsample_threshold;
  for (const auto& word : sentence.tokens) {
    if (auto count = model.sketch.count(word)) {
      const double freq = static_cast<double>(*count) / observed;
      const double keep = std::sqrt(threshold / freq);
      if (keep < 1.0 && rng.uniform01() >= keep) continue;
    }
    kept.tokens.push_back(word);
  }
  return kept;
}

std::uint32_t effective_radius(const TrainerConfig& config, Rng& rng) {
  if (!config.dynamic_windows || config.context_radius == 1) {
    return config.context_radius;
  }
  return static_cast<std::uint32_t>(rng.uniform_int(1, config.context_radius));
}

void train_sentence(StreamModel& model, const Sentence& sentence, Rng& rng) {
  auto& stats = model.stats;
  ++stats.sentences;
  stats.tokens += sentence.tokens.size();

  const Sentence kept = subsample_sentence(model, sentence, rng);
  stats.retained_tokens += kept.tokens.size();

  for (const auto& word : kept.tokens) {
    const ObserveOutcome outcome = model.sketch.observe(word);
    if (outcome.kind == ObserveKind::kReplaced) {
      reset_slot(model.table, model.learning, outcome.slot, rng);
      ++stats.ejections;
    }
    model.negatives.observe(outcome.slot, rng);
  }

  const std::size_t len = kept.tokens.size();
  const std::size_t radius = model.config.context_radius;
  if (len < 2 * radius + 1) return;

  std::vector<Slot> window;
  std::vector<Slot> negatives(model.config.negatives);
  for (std::size_t center = radius; center + radius < len; ++center) {
    // Residency is judged on the full 2C+1 span; a dynamic radius only
    // shrinks the set of contexts trained.
    window.clear();
    bool resident = true;
    for (std::size_t i = center - radius; i <= center + radius; ++i) {
      const auto slot = model.sketch.slot_of(kept.tokens[i]);
      if (!slot) {
        resident = false;
        break;
      }
      window.push_back(*slot);
    }
    if (!resident) {
      ++stats.contexts_skipped;
      continue;
    }
    ++stats.contexts_trained;
    const std::size_t r = effective_radius(model.config, rng);
    const Slot input = window[radius];
    for (std::size_t i = radius - r; i <= radius + r; ++i) {
      if (i == radius) continue;
      for (auto& k : negatives) k = model.negatives.draw(rng);
      sgns_step(model.table, model.learning,
                GradientStepSpec{input, window[i], negatives});
    }
  }
}

StreamStats train_stream(StreamModel& model, std::istream& in,
                         const ProgressOptions& progress) {
  SentenceReader reader(in, model.config.max_sentence_len);
  Sentence sentence;
  std::uint64_t next_report = model.stats.tokens + progress.interval_tokens;
  while (reader.next(sentence)) {
    train_sentence(model, sentence, model.rng);
    if (progress.interval_tokens > 0 && progress.callback &&
        model.stats.tokens >= next_report) {
      progress.callback(model);
      next_report = model.stats.tokens + progress.interval_tokens;
    }
  }
  return model.stats;
}

}  // namespace ssvec
