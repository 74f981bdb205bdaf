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

#include "ssvec/batch_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ssvec/error.hpp"

namespace ssvec {

BatchVocab BatchVocab::from_ranked(RankedCounts ranked) {
  BatchVocab vocab;
  vocab.words = std::move(ranked);
  vocab.index.reserve(vocab.words.size());
  for (std::size_t i = 0; i < vocab.words.size(); ++i) {
    vocab.index.emplace(vocab.words[i].first, static_cast<WordId>(i));
    vocab.total_tokens += vocab.words[i].second;
  }
  return vocab;
}

BatchVocab build_vocab(const CountTable& counts, std::uint64_t min_count) {
  require(min_count >= 1, "min_count must be at least 1");
  RankedCounts ranked = rank_by_frequency(counts);
  const auto cut = std::find_if(ranked.begin(), ranked.end(), [&](auto& e) {
    return e.second < min_count;
  });
  ranked.erase(cut, ranked.end());
  require(ranked.size() < 0xFFFFFFFFull, "vocabulary too large");
  return BatchVocab::from_ranked(std::move(ranked));
}

BatchVocab build_vocab(std::istream& in, std::uint64_t min_count) {
  return build_vocab(exact_counts(in), min_count);
}

NegativeTable build_negative_table(const BatchVocab& vocab,
                                   std::size_t table_len) {
  require(!vocab.words.empty(), "negative table needs a non-empty vocabulary");
  require(table_len >= vocab.size(), "table must have at least |V| entries");

  const std::size_t n = vocab.size();
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::pow(static_cast<double>(vocab.words[i].second), 0.75);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  std::vector<std::size_t> quota(n);
  std::vector<double> remainder(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = static_cast<double>(table_len) * weights[i] / total;
    quota[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(quota[i]);
    assigned += quota[i];
  }
  // Rounding in `exact` can push the floor sum a hair past table_len.
  while (assigned > table_len) {
    const auto it = std::max_element(quota.begin(), quota.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t k = 0; assigned < table_len; k = (k + 1) % n) {
    ++quota[order[k]];
    ++assigned;
  }

  NegativeTable table;
  table.entries.reserve(table_len);
  for (std::size_t i = 0; i < n; ++i) {
    table.entries.insert(table.entries.end(), quota[i],
                         static_cast<WordId>(i));
  }
  return table;
}

EmbeddingTable batch_train(const CorpusSource& source, const BatchVocab& vocab,
                           const NegativeTable& negatives,
                           const TrainerConfig& config, std::uint32_t epochs,
                           Rng& rng) {
  require(!vocab.words.empty(), "batch training needs a non-empty vocabulary");
  require(!negatives.entries.empty(), "empty negative table");
  config.validate();

  EmbeddingTable table =
      EmbeddingTable::standard_normal(vocab.size(), config.dim, rng);

  std::vector<double> keep_prob(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const double freq = static_cast<double>(vocab.words[i].second) /
                        static_cast<double>(vocab.total_tokens);
    keep_prob[i] = std::min(1.0, std::sqrt(config.subsample_threshold / freq));
  }

  const double rho0 = config.schedule.rho0;
  const double rho_min = config.schedule.rho_min;
  const double horizon =
      static_cast<double>(epochs) * static_cast<double>(vocab.total_tokens);
  std::uint64_t processed = 0;

  std::vector<WordId> ids;
  std::vector<Slot> negs(config.negatives);
  Sentence sentence;
  for (std::uint32_t epoch = 0; epoch < epochs; ++epoch) {
    auto in = source.open();
    SentenceReader reader(*in, config.max_sentence_len);
    while (reader.next(sentence)) {
      ids.clear();
      for (const auto& w : sentence.tokens) {
        const auto id = vocab.id_of(w);
        if (!id) continue;
        ++processed;
        if (keep_prob[*id] < 1.0 && rng.uniform01() >= keep_prob[*id]) {
          continue;
        }
        ids.push_back(*id);
      }
      const double rate = std::max(
          rho_min, rho0 * (1.0 - static_cast<double>(processed) / horizon));
      const std::size_t len = ids.size();
      for (std::size_t center = 0; center < len; ++center) {
        const std::size_t r = effective_radius(config, rng);
        const std::size_t lo = center >= r ? center - r : 0;
        const std::size_t hi = std::min(len - 1, center + r);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == center) continue;
          for (auto& k : negs) k = negatives.draw(rng);
          sgns_step(table, rate, GradientStepSpec{ids[center], ids[j], negs});
        }
      }
    }
  }
  return table;
}

BatchModel train_batch_model(const CorpusSource& source,
                             const TrainerConfig& config,
                             const BatchOptions& options) {
  config.validate();
  BatchVocab vocab = [&] {
    auto in = source.open();
    BatchVocab full = build_vocab(*in, options.min_count);
    if (options.max_vocab == 0 || full.size() <= options.max_vocab) return full;
    full.words.resize(options.max_vocab);
    return BatchVocab::from_ranked(std::move(full.words));
  }();
  const NegativeTable negatives = build_negative_table(
      vocab, std::max<std::size_t>(options.table_size, vocab.size()));
  Rng rng(config.seed);
  EmbeddingTable table =
      batch_train(source, vocab, negatives, config, options.epochs, rng);
  return BatchModel{config, options, std::move(vocab), std::move(table)};
}

void write_vocab_tsv(const BatchVocab& vocab, std::ostream& out) {
  for (const auto& [word, count] : vocab.words) {
    out << word << '\t' << count << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "write failed");
}

}  // namespace ssvec
