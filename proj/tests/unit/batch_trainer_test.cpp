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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "ssvec/batch_trainer.hpp"
#include "ssvec/error.hpp"
#include "test_support.hpp"

using namespace ssvec;

namespace {

CountTable table_of(std::initializer_list<std::pair<const char*, std::uint64_t>> items) {
  CountTable t;
  for (const auto& [w, c] : items) t.add(w, c);
  return t;
}

std::map<WordId, std::size_t> occupancy(const NegativeTable& table) {
  std::map<WordId, std::size_t> out;
  for (WordId id : table.entries) ++out[id];
  return out;
}

TrainerConfig small_config() {
  TrainerConfig c;
  c.dim = 8;
  c.negatives = 3;
  c.seed = 5;
  return c;
}

std::string zipf_text(std::size_t types, std::size_t tokens, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const auto words = testing::zipf_stream(types, tokens, 1.0, gen);
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    text += words[i];
    text += (i % 10 == 9) ? '\n' : ' ';
  }
  return text;
}

}  // namespace

TEST_CASE("vocabulary honors min_count") {
  const auto v = build_vocab(table_of({{"a", 6}, {"b", 2}}), 5);
  CHECK(v.size() == 1);
  CHECK(v.words[0] == std::pair<std::string, std::uint64_t>{"a", 6});
  CHECK(v.total_tokens == 6);
  CHECK(v.id_of("a") == WordId{0});
  CHECK_FALSE(v.id_of("b").has_value());

  const auto all = build_vocab(table_of({{"a", 6}, {"b", 2}, {"c", 2}}), 1);
  CHECK(all.size() == 3);
  CHECK(all.words[1].first == "b");
  CHECK(all.words[2].first == "c");
  CHECK_THROWS_AS(build_vocab(CountTable{}, 0), Error);
}

TEST_CASE("property: vocabulary counts are the exact counts") {
  const std::string text = zipf_text(200, 5000, 1);
  std::istringstream a(text), b(text);
  const CountTable truth = exact_counts(a);
  const BatchVocab v = build_vocab(b, 3);
  std::size_t expected = 0;
  for (const auto& [w, c] : truth.entries) {
    if (c >= 3) {
      ++expected;
      REQUIRE(v.id_of(w).has_value());
      CHECK(v.words[*v.id_of(w)].second == c);
    } else {
      CHECK_FALSE(v.id_of(w).has_value());
    }
  }
  CHECK(v.size() == expected);
}

TEST_CASE("negative table fill") {
  {
    const auto v = build_vocab(table_of({{"only", 3}}), 1);
    const auto t = build_negative_table(v, 50);
    CHECK(t.entries.size() == 50);
    CHECK(occupancy(t).at(0) == 50);
  }
  {
    const auto v = build_vocab(table_of({{"x", 4}, {"y", 4}}), 1);
    const auto t = build_negative_table(v, 101);
    const auto occ = occupancy(t);
    CHECK(std::abs(static_cast<double>(occ.at(0)) - 50.5) <= 1.0);
    CHECK(std::abs(static_cast<double>(occ.at(1)) - 50.5) <= 1.0);
  }
  {
    // 16^0.75 = 8 and 1^0.75 = 1.
    const auto v = build_vocab(table_of({{"a", 16}, {"b", 1}}), 1);
    const std::size_t len = 1000;
    const auto t = build_negative_table(v, len);
    CHECK(std::abs(static_cast<double>(occupancy(t).at(0)) - len * 8.0 / 9.0) <= 1.0);
  }
  const auto v = build_vocab(table_of({{"a", 1}}), 1);
  CHECK_THROWS_AS(build_negative_table(v, 0), Error);
}

TEST_CASE("property: table shares are within one entry of the smoothed distribution") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    CountTable counts;
    const int types = 1 + static_cast<int>(gen() % 60);
    for (int i = 0; i < types; ++i) counts.add("w" + std::to_string(i), 1 + gen() % 500);
    const auto v = build_vocab(counts, 1);
    const std::size_t len = v.size() + gen() % 5000;
    const auto t = build_negative_table(v, len);
    REQUIRE(t.entries.size() == len);
    double z = 0;
    for (const auto& [w, c] : v.words) z += std::pow(static_cast<double>(c), 0.75);
    const auto occ = occupancy(t);
    for (WordId id = 0; id < v.size(); ++id) {
      const double p = std::pow(static_cast<double>(v.words[id].second), 0.75) / z;
      const double share = occ.count(id) ? static_cast<double>(occ.at(id)) : 0.0;
      CHECK(std::abs(share / len - p) <= 1.0 / len + 1e-12);
    }
    Rng rng(trial);
    for (int i = 0; i < 100; ++i) CHECK(t.draw(rng) < v.size());
  }
}

TEST_CASE("zero epochs returns the initialization") {
  MemorySource source(zipf_text(30, 2000, 2));
  auto in = source.open();
  const auto vocab = build_vocab(*in, 1);
  const auto negs = build_negative_table(vocab, 1000);
  Rng rng(9), init_rng(9);
  const auto table = batch_train(source, vocab, negs, small_config(), 0, rng);
  CHECK(table == EmbeddingTable::standard_normal(vocab.size(), 8, init_rng));
}

TEST_CASE("batch training is deterministic and stays in the vocabulary") {
  MemorySource source(zipf_text(300, 20000, 4) + "\nrare1 rare2 rare3\n");
  BatchOptions opts;
  opts.min_count = 2;
  opts.table_size = 10000;
  const auto a = train_batch_model(source, small_config(), opts);
  const auto b = train_batch_model(source, small_config(), opts);
  CHECK(a.table == b.table);
  CHECK(a.table.rows() == a.vocab.size());
  CHECK_FALSE(a.vocab.id_of("rare1").has_value());
  CHECK(a.table.all_finite());

  auto other = small_config();
  other.seed = 6;
  CHECK_FALSE(train_batch_model(source, other, opts).table == a.table);

  opts.max_vocab = 10;
  const auto capped = train_batch_model(source, small_config(), opts);
  CHECK(capped.vocab.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(capped.vocab.words[i] == a.vocab.words[i]);
}

TEST_CASE("co-occurring words end up closer than unrelated ones") {
  // Two disjoint "topics" that never share a sentence.
  std::mt19937_64 gen(8);
  std::string text;
  for (int s = 0; s < 4000; ++s) {
    const char topic = s % 2 ? 'x' : 'y';
    for (int i = 0; i < 8; ++i) {
      text += topic;
      text += std::to_string(gen() % 10);
      text += ' ';
    }
    text += '\n';
  }
  MemorySource source(text);
  auto cfg = small_config();
  cfg.dim = 16;
  cfg.subsample_threshold = 1.0;
  BatchOptions opts;
  opts.epochs = 3;
  opts.table_size = 10000;
  const auto m = train_batch_model(source, cfg, opts);
  auto vec = [&](const char* w) { return m.table.target(*m.vocab.id_of(w)); };
  double same = 0, cross = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i == j) continue;
      const auto xi = "x" + std::to_string(i), xj = "x" + std::to_string(j);
      const auto yj = "y" + std::to_string(j);
      same += *cosine(vec(xi.c_str()), vec(xj.c_str()));
      cross += *cosine(vec(xi.c_str()), vec(yj.c_str()));
    }
  }
  CHECK(same / 90 > cross / 90 + 0.1);
}

TEST_CASE("vocabulary TSV") {
  const auto v = build_vocab(table_of({{"b", 2}, {"a", 5}}), 1);
  std::ostringstream out;
  write_vocab_tsv(v, out);
  CHECK(out.str() == "a\t5\nb\t2\n");
}
