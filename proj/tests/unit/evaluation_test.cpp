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
#include <set>
#include <sstream>

#include "ssvec/error.hpp"
#include "ssvec/evaluation.hpp"
#include "test_support.hpp"

using namespace ssvec;

namespace {

SpaceSavingSketch sketch_of(std::initializer_list<const char*> stream, std::size_t k) {
  SpaceSavingSketch s(k);
  for (const char* w : stream) s.observe(w);
  return s;
}

CountTable truth_of(std::initializer_list<const char*> stream) {
  CountTable t;
  for (const char* w : stream) t.add(w);
  return t;
}

const CountErrorRow& row_for(const CountErrorReport& r, const std::string& w) {
  for (const auto& row : r.rows) {
    if (row.word == w) return row;
  }
  throw std::runtime_error("missing row " + w);
}

std::vector<std::string> ranked_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("r" + std::to_string(i));
  return out;
}

EmbeddingSnapshot random_snapshot(std::size_t words, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  EmbeddingSnapshot snap(dim);
  std::vector<float> v(dim);
  for (std::size_t i = 0; i < words; ++i) {
    for (auto& x : v) x = static_cast<float>(rng.normal());
    snap.add("r" + std::to_string(i + 1), v);
  }
  return snap;
}

}  // namespace

TEST_CASE("count error with a large sketch is zero") {
  std::mt19937_64 gen(1);
  const auto stream = testing::zipf_stream(50, 2000, 1.0, gen);
  SpaceSavingSketch s(50);
  CountTable truth;
  for (const auto& w : stream) {
    s.observe(w);
    truth.add(w);
  }
  for (auto mode : {CountErrorMode::kImpute, CountErrorMode::kOmit}) {
    const auto report = count_error_report(s, truth, mode);
    CHECK(report.rows.size() == truth.entries.size());
    for (const auto& row : report.rows) CHECK(row.relative_error == 0.0);
  }
}

TEST_CASE("count error for K=2 and a,b,a,c") {
  const auto s = sketch_of({"a", "b", "a", "c"}, 2);
  const auto truth = truth_of({"a", "b", "a", "c"});
  const auto impute = count_error_report(s, truth, CountErrorMode::kImpute);
  CHECK(row_for(impute, "a").relative_error == 0.0);
  CHECK(row_for(impute, "c").relative_error == 1.0);
  CHECK(row_for(impute, "b").estimate == 2u);
  CHECK(row_for(impute, "b").relative_error == 1.0);
  CHECK(impute.rows[0].word == "a");
  CHECK(impute.rows[0].rank == 1);

  const auto omit = count_error_report(s, truth, CountErrorMode::kOmit);
  CHECK_FALSE(row_for(omit, "b").estimate.has_value());
  CHECK_FALSE(row_for(omit, "b").relative_error.has_value());
  CHECK(row_for(omit, "c").relative_error == 1.0);

  std::ostringstream csv;
  omit.write_csv(csv);
  CHECK(csv.str() == "rank,word,true,est,rel_err\n1,a,2,2,0\n2,b,1,,\n3,c,1,2,1\n");
}

TEST_CASE("property: count error bounds") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + gen() % 20;
    const auto stream = testing::zipf_stream(150, 1000, 1.0, gen);
    SpaceSavingSketch s(k);
    CountTable truth;
    for (const auto& w : stream) {
      s.observe(w);
      truth.add(w);
    }
    const auto impute = count_error_report(s, truth, CountErrorMode::kImpute);
    const auto omit = count_error_report(s, truth, CountErrorMode::kOmit);
    for (std::size_t i = 0; i < impute.rows.size(); ++i) {
      const auto& ri = impute.rows[i];
      const auto& ro = omit.rows[i];
      CHECK(ri.estimate.has_value());
      CHECK(*ri.relative_error >= -1.0);
      const bool resident = s.slot_of(ri.word).has_value();
      CHECK(ro.estimate.has_value() == resident);
      if (resident) {
        CHECK(*ro.relative_error >= 0.0);
        CHECK(*ro.relative_error <=
              static_cast<double>(stream.size()) / (k * ri.true_count) + 1e-12);
      }
    }
  }
}

TEST_CASE("sketch_corpus counts every token") {
  std::istringstream in("a b a\nc a\n");
  const auto s = sketch_corpus(in, 10);
  CHECK(s.observed() == 5);
  CHECK(s.count("a") == 3);
}

TEST_CASE("bucket pairs: small cases") {
  const std::vector<std::string> two{"a", "b"};
  Rng rng(1);
  const auto pairs = sample_bucket_pairs(two, {1, 2}, {1, 2}, 10, rng);
  CHECK(pairs == std::vector<WordPair>{{"a", "b"}});

  const auto names = ranked_names(300);
  const auto all = sample_bucket_pairs(names, {1, 100}, {101, 200}, 20000, rng);
  CHECK(all.size() == 10000);
  CHECK(std::set<WordPair>(all.begin(), all.end()).size() == 10000);

  const auto some = sample_bucket_pairs(names, {1, 100}, {101, 200}, 500, rng);
  CHECK(some.size() == 500);
  CHECK(std::set<WordPair>(some.begin(), some.end()).size() == 500);

  // Overlapping intervals: {1..3} x {2..4} has 6 unordered distinct pairs.
  CHECK(sample_bucket_pairs(names, {1, 3}, {2, 4}, 100, rng).size() == 6);

  CHECK(sample_bucket_pairs(names, {1, 3}, {2, 4}, 0, rng).empty());
  CHECK_THROWS_AS(sample_bucket_pairs(names, {5, 4}, {1, 2}, 1, rng), Error);
  CHECK_THROWS_AS(sample_bucket_pairs(names, {0, 4}, {1, 2}, 1, rng), Error);
  CHECK_THROWS_AS(sample_bucket_pairs(names, {1, 4}, {1, 301}, 1, rng), Error);
}

TEST_CASE("bucket pairs: same seed, same pairs") {
  const auto names = ranked_names(500);
  Rng a(9), b(9);
  CHECK(sample_bucket_pairs(names, {1, 200}, {100, 400}, 300, a) ==
        sample_bucket_pairs(names, {1, 200}, {100, 400}, 300, b));
}

TEST_CASE("bucket pairs: uniform over unordered pairs") {
  const auto names = ranked_names(10);
  Rng rng(3);
  std::map<WordPair, std::uint64_t> freq;
  const std::uint64_t trials = 60000;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto p = sample_bucket_pairs(names, {1, 3}, {2, 4}, 1, rng);
    REQUIRE(p.size() == 1);
    ++freq[p[0]];
  }
  CHECK(freq.size() == 6);
  for (const auto& [pair, n] : freq) CHECK(testing::within_3_sigma(n, trials, 1.0 / 6));
}

TEST_CASE("bucket pairs: large intervals use rejection sampling") {
  const auto names = ranked_names(6000);
  Rng rng(4);
  const auto pairs = sample_bucket_pairs(names, {1, 5000}, {1000, 6000}, 3000, rng);
  CHECK(pairs.size() == 3000);
  CHECK(std::set<WordPair>(pairs.begin(), pairs.end()).size() == 3000);
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < names.size(); ++i) rank[names[i]] = i + 1;
  for (const auto& [x, y] : pairs) {
    const auto rx = rank[x], ry = rank[y];
    CHECK(rx < ry);
    const bool ok = (rx <= 5000 && ry >= 1000) || (ry <= 5000 && rx >= 1000);
    CHECK(ok);
  }
}

TEST_CASE("pearson") {
  const std::vector<double> xs{1, 2, 3}, ys{1, 2, 4};
  // By hand: Sxy = 3, Sxx = 2, Syy = 42/9.
  const double oracle = 3.0 / std::sqrt(2.0 * 42.0 / 9.0);
  CHECK(*pearson(xs, ys) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::abs(*pearson(xs, ys) - 0.981) <= 0.001);
  CHECK(*pearson(xs, xs) == doctest::Approx(1.0));
  std::vector<double> neg{-1, -2, -3};
  CHECK(*pearson(xs, neg) == doctest::Approx(-1.0));
  CHECK_FALSE(pearson(std::vector<double>{1}, std::vector<double>{2}).has_value());
  CHECK_FALSE(pearson(xs, std::vector<double>{5, 5, 5}).has_value());

  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(20), up(20), down(20);
    const double scale = 0.1 + std::abs(nd(gen)), shift = nd(gen);
    for (int i = 0; i < 20; ++i) {
      a[i] = nd(gen);
      up[i] = scale * a[i] + shift;
      down[i] = -scale * a[i] + shift;
    }
    CHECK(*pearson(a, up) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(*pearson(a, down) == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("similarity correlation") {
  const auto a = random_snapshot(50, 6, 1);
  const auto names = ranked_names(50);
  Rng rng(2);
  const auto pairs = sample_bucket_pairs(names, {1, 50}, {1, 50}, 200, rng);

  const auto same = similarity_correlation(a, a, pairs);
  CHECK(same.pairs_sampled == 200);
  CHECK(same.defined_pairs == 200);
  CHECK(same.undefined_fraction == 0.0);
  CHECK(*same.pearson_r == doctest::Approx(1.0));

  // b knows only the first 25 words.
  EmbeddingSnapshot b(6);
  for (std::size_t i = 0; i < 25; ++i) b.add(a.word(i), a.vector(i));
  const auto partial = similarity_correlation(a, b, pairs);
  const auto swapped = similarity_correlation(b, a, pairs);
  CHECK(partial.defined_pairs == swapped.defined_pairs);
  CHECK(partial.defined_pairs < 200);
  CHECK(partial.undefined_fraction ==
        doctest::Approx(1.0 - partial.defined_pairs / 200.0));
  CHECK(partial.points.size() == partial.defined_pairs);

  const auto none = similarity_correlation(a, a, {});
  CHECK_FALSE(none.pearson_r.has_value());

  std::ostringstream csv;
  SimilarityReport r = same;
  r.bucket_a = {1, 50};
  r.bucket_b = {1, 50};
  write_similarity_csv(std::span<const SimilarityReport>(&r, 1), csv);
  CHECK(csv.str().rfind("bucket_a,bucket_b,word1,word2,sim_a,sim_b\n1-50,1-50,", 0) == 0);
}

TEST_CASE("zero vectors make a pair undefined") {
  EmbeddingSnapshot a(2);
  a.add("x", std::vector<float>{1, 0});
  a.add("y", std::vector<float>{0, 0});
  a.add("z", std::vector<float>{1, 1});
  const std::vector<WordPair> pairs{{"x", "y"}, {"x", "z"}};
  const auto r = similarity_correlation(a, a, pairs);
  CHECK(r.defined_pairs == 1);
  CHECK(r.undefined_fraction == 0.5);
  CHECK_FALSE(r.pearson_r.has_value());
}

TEST_CASE("nearest neighbors") {
  const auto snap = random_snapshot(40, 5, 3);
  CHECK(nearest_neighbors(snap, "r1", 0).empty());
  const auto top = nearest_neighbors(snap, "r1", 10);
  CHECK(top.size() == 10);
  for (std::size_t i = 0; i < top.size(); ++i) {
    CHECK(top[i].first != "r1");
    if (i > 0) CHECK(top[i].second <= top[i - 1].second);
  }
  CHECK(nearest_neighbors(snap, "r1", 100).size() == 39);
  try {
    nearest_neighbors(snap, "missing", 3);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownWord);
  }
}

TEST_CASE("snapshots") {
  EmbeddingSnapshot s(2);
  s.add("a", std::vector<float>{1, 2});
  CHECK_THROWS_AS(s.add("a", std::vector<float>{1, 2}), Error);
  CHECK_THROWS_AS(s.add("b", std::vector<float>{1}), Error);
  CHECK(s.find("a").has_value());
  CHECK_FALSE(s.find("b").has_value());

  TrainerConfig c;
  c.vocab_capacity = 5;
  c.reservoir_capacity = 10;
  c.dim = 3;
  StreamModel model(c);
  Rng rng(1);
  Sentence sent;
  sent.tokens = {"p", "q", "p"};
  train_sentence(model, sent, rng);
  const auto snap = EmbeddingSnapshot::of(model);
  CHECK(snap.size() == 2);
  CHECK(snap.word(0) == "p");
  const auto v = *snap.find("q");
  const auto row = model.table.target(*model.sketch.slot_of("q"));
  CHECK(std::equal(v.begin(), v.end(), row.begin()));
}
