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

// Intrinsic evaluation: sketch count error by frequency rank, and agreement
// of pairwise cosine similarities between two embedding models.

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ssvec/batch_trainer.hpp"
#include "ssvec/corpus.hpp"
#include "ssvec/rng.hpp"
#include "ssvec/space_saving.hpp"
#include "ssvec/stream_trainer.hpp"

namespace ssvec {

/// An immutable copy of a model's target vectors keyed by word. Streaming
/// models contribute their resident words, batch models their vocabulary.
class EmbeddingSnapshot {
 public:
  EmbeddingSnapshot() = default;
  explicit EmbeddingSnapshot(std::size_t dim) : dim_(dim) {}

  static EmbeddingSnapshot of(const StreamModel& model);
  static EmbeddingSnapshot of(const BatchModel& model);

  /// Appends a word; throws on duplicates or a dimension mismatch.
  void add(std::string word, std::span<const float> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::span<const float> vector(std::size_t i) const {
    return {vectors_.data() + i * dim_, dim_};
  }
  std::optional<std::span<const float>> find(std::string_view word) const;
  std::optional<std::size_t> index_of(std::string_view word) const {
    if (auto it = index_.find(word); it != index_.end()) return it->second;
    return std::nullopt;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<float> vectors_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>
      index_;
};

enum class CountErrorMode { kImpute, kOmit };

struct CountErrorRow {
  std::size_t rank;  // 1-based
  std::string word;
  std::uint64_t true_count;
  std::optional<std::uint64_t> estimate;
  std::optional<double> relative_error;
};

struct CountErrorReport {
  CountErrorMode mode;
  std::vector<CountErrorRow> rows;

  /// CSV with header rank,word,true,est,rel_err; undefined cells are empty.
  void write_csv(std::ostream& out) const;
};

/// Feeds every token of `in` to a fresh sketch of `capacity` slots, without
/// subsampling.
SpaceSavingSketch sketch_corpus(std::istream& in, std::size_t capacity,
                                std::size_t max_sentence_len = kDefaultMaxSentenceLen);

/// Relative error (estimate - true) / true of the sketch count for every
/// word of `truth`, in rank order. Non-resident words get the sketch's
/// minimum count in impute mode and no estimate in omit mode.
CountErrorReport count_error_report(const SpaceSavingSketch& sketch,
                                    const CountTable& truth,
                                    CountErrorMode mode);

/// Inclusive 1-based rank interval.
struct RankInterval {
  std::size_t lo;
  std::size_t hi;
};

using WordPair = std::pair<std::string, std::string>;

/// Draws up to n_pairs distinct unordered pairs {x, y}, x != y, with x from
/// interval `a` and y from interval `b` of `ranked_words`, uniformly over all
/// such pairs. Returns every pair when there are at most n_pairs of them.
/// Each pair is ordered by rank.
std::vector<WordPair> sample_bucket_pairs(
    std::span<const std::string> ranked_words, RankInterval a, RankInterval b,
    std::size_t n_pairs, Rng& rng);

struct SimilarityPoint {
  std::string word1;
  std::string word2;
  double similarity_a;
  double similarity_b;
};

struct SimilarityReport {
  RankInterval bucket_a{0, 0};
  RankInterval bucket_b{0, 0};
  std::size_t pairs_sampled = 0;
  std::size_t defined_pairs = 0;
  double undefined_fraction = 0.0;
  std::optional<double> pearson_r;
  std::vector<SimilarityPoint> points;
};

/// A pair is defined when both words resolve in both models and both
/// cosines are defined; Pearson r is computed over defined pairs only.
SimilarityReport similarity_correlation(const EmbeddingSnapshot& model_a,
                                        const EmbeddingSnapshot& model_b,
                                        std::span<const WordPair> pairs);

/// Sample Pearson correlation; nullopt with fewer than two points or a
/// zero variance.
std::optional<double> pearson(std::span<const double> xs,
                              std::span<const double> ys);

/// Top-n words by cosine against `word`, excluding the word itself;
/// descending, ties by word. Throws kUnknownWord if `word` is absent.
std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingSnapshot& model, std::string_view word, std::size_t n);

/// Writes points as word1,word2,sim_a,sim_b rows prefixed by the buckets.
void write_similarity_csv(std::span<const SimilarityReport> reports,
                          std::ostream& out);

}  // namespace ssvec
