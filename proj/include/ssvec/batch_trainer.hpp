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

// Two-pass word2vec-style SGNS: exact min-count vocabulary, a 0.75-smoothed
// unigram table for negatives, then one or more training epochs with a
// single global linearly decaying learning rate.

#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ssvec/corpus.hpp"
#include "ssvec/rng.hpp"
#include "ssvec/sgns.hpp"
#include "ssvec/space_saving.hpp"
#include "ssvec/stream_trainer.hpp"

namespace ssvec {

using WordId = std::uint32_t;

struct BatchVocab {
  /// Retained words with exact counts; ids are positions in this list.
  std::vector<std::pair<std::string, std::uint64_t>> words;
  std::unordered_map<std::string, WordId, StringHash, std::equal_to<>> index;
  /// Sum of the retained words' counts.
  std::uint64_t total_tokens = 0;

  std::optional<WordId> id_of(std::string_view word) const {
    if (auto it = index.find(word); it != index.end()) return it->second;
    return std::nullopt;
  }
  std::size_t size() const { return words.size(); }

  /// Builds from rank-ordered (word, count) pairs already filtered.
  static BatchVocab from_ranked(RankedCounts ranked);
};

BatchVocab build_vocab(const CountTable& counts, std::uint64_t min_count);
BatchVocab build_vocab(std::istream& in, std::uint64_t min_count);

struct NegativeTable {
  std::vector<WordId> entries;

  WordId draw(Rng& rng) const {
    return entries[rng.uniform_index(entries.size())];
  }
};

/// Word w fills floor(len * p_w) entries, p_w proportional to count^0.75;
/// the leftover entries go to the largest fractional parts (ties to the
/// lower id). Entries are laid out in id order.
NegativeTable build_negative_table(const BatchVocab& vocab,
                                   std::size_t table_len);

struct BatchOptions {
  std::uint32_t epochs = 1;
  std::uint64_t min_count = 5;
  std::uint64_t table_size = 100'000'000;
  std::uint64_t max_vocab = 0;  // keep only the top-n words; 0 keeps all
};

/// Trains vocab.size() x D embeddings on `source`, which is re-read once per
/// epoch. Uses config's dim, negatives, window, subsampling threshold and
/// rho0/rho_min; the rate decays linearly over epochs * total_tokens
/// in-vocabulary tokens. Windows are truncated at sentence edges. With
/// epochs == 0 the N(0, 1) initialization is returned untouched.
EmbeddingTable batch_train(const CorpusSource& source, const BatchVocab& vocab,
                           const NegativeTable& negatives,
                           const TrainerConfig& config, std::uint32_t epochs,
                           Rng& rng);

struct BatchModel {
  TrainerConfig config;
  BatchOptions options;
  BatchVocab vocab;
  EmbeddingTable table;
};

/// build_vocab (truncated to options.max_vocab) + build_negative_table +
/// batch_train, seeded from config.seed.
BatchModel train_batch_model(const CorpusSource& source,
                             const TrainerConfig& config,
                             const BatchOptions& options);

/// Writes word<TAB>count lines in id order.
void write_vocab_tsv(const BatchVocab& vocab, std::ostream& out);

}  // namespace ssvec
