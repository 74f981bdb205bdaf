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

#include "ssvec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "ssvec/error.hpp"

namespace ssvec {

namespace {

// Pair enumeration switches to rejection sampling above this many
// candidate (x, y) combinations.
constexpr std::uint64_t kEnumerationLimit = 4'000'000;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

bool contains(RankInterval r, std::size_t rank) {
  return rank >= r.lo && rank <= r.hi;
}

}  // namespace

EmbeddingSnapshot EmbeddingSnapshot::of(const StreamModel& model) {
  EmbeddingSnapshot snap(model.table.dim());
  for (const auto& [word, count] : model.sketch.items()) {
    snap.add(word, model.table.target(*model.sketch.slot_of(word)));
  }
  return snap;
}

EmbeddingSnapshot EmbeddingSnapshot::of(const BatchModel& model) {
  EmbeddingSnapshot snap(model.table.dim());
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    snap.add(model.vocab.words[i].first, model.table.target(i));
  }
  return snap;
}

void EmbeddingSnapshot::add(std::string word, std::span<const float> vector) {
  require(vector.size() == dim_, "vector dimension mismatch");
  require(!index_.contains(word), "duplicate word in snapshot: " + word);
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  vectors_.insert(vectors_.end(), vector.begin(), vector.end());
}

std::optional<std::span<const float>> EmbeddingSnapshot::find(
    std::string_view word) const {
  if (auto it = index_.find(word); it != index_.end()) {
    return vector(it->second);
  }
  return std::nullopt;
}

SpaceSavingSketch sketch_corpus(std::istream& in, std::size_t capacity,
                                std::size_t max_sentence_len) {
  SpaceSavingSketch sketch(capacity);
  SentenceReader reader(in, max_sentence_len);
  Sentence sentence;
  while (reader.next(sentence)) {
    for (const auto& w : sentence.tokens) sketch.observe(w);
  }
  return sketch;
}

CountErrorReport count_error_report(const SpaceSavingSketch& sketch,
                                    const CountTable& truth,
                                    CountErrorMode mode) {
  CountErrorReport report{mode, {}};
  const RankedCounts ranked = rank_by_frequency(truth);
  report.rows.reserve(ranked.size());
  const std::uint64_t floor_count = sketch.min_count();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& [word, true_count] = ranked[i];
    CountErrorRow row{i + 1, word, true_count, sketch.count(word), {}};
    if (!row.estimate && mode == CountErrorMode::kImpute) {
      row.estimate = floor_count;
    }
    if (row.estimate) {
      row.relative_error = (static_cast<double>(*row.estimate) -
                            static_cast<double>(true_count)) /
                           static_cast<double>(true_count);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void CountErrorReport::write_csv(std::ostream& out) const {
  out << "rank,word,true,est,rel_err\n";
  for (const auto& row : rows) {
    out << row.rank << ',' << csv_field(row.word) << ',' << row.true_count
        << ',';
    if (row.estimate) out << *row.estimate;
    out << ',';
    if (row.relative_error) out << format_real(*row.relative_error);
    out << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "write failed");
}

std::vector<WordPair> sample_bucket_pairs(
    std::span<const std::string> ranked_words, RankInterval a, RankInterval b,
    std::size_t n_pairs, Rng& rng) {
  const std::size_t n = ranked_words.size();
  for (const auto& r : {a, b}) {
    require(r.lo >= 1 && r.lo <= r.hi && r.hi <= n,
            "rank interval empty or outside the vocabulary");
  }
  auto to_words = [&](std::size_t x, std::size_t y) {
    return WordPair{ranked_words[x - 1], ranked_words[y - 1]};
  };

  const std::uint64_t size_a = a.hi - a.lo + 1;
  const std::uint64_t size_b = b.hi - b.lo + 1;
  std::vector<WordPair> out;
  if (n_pairs == 0) return out;

  if (size_a * size_b <= kEnumerationLimit) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> all;
    for (std::size_t x = a.lo; x <= a.hi; ++x) {
      for (std::size_t y = b.lo; y <= b.hi; ++y) {
        // (y, x) is also in a x b: keep only one of the two orderings.
        if (x == y || (x > y && contains(a, y) && contains(b, x))) continue;
        all.emplace_back(static_cast<std::uint32_t>(std::min(x, y)),
                         static_cast<std::uint32_t>(std::max(x, y)));
      }
    }
    const std::size_t take = std::min(n_pairs, all.size());
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.uniform_index(all.size() - i);
      std::swap(all[i], all[j]);
      out.push_back(to_words(all[i].first, all[i].second));
    }
    return out;
  }

  // Too many candidates to list: draw (x, y) from a x b and accept it with
  // probability 1 / (number of orderings that could have produced it), which
  // makes every unordered pair equally likely.
  const std::uint64_t overlap_lo = std::max(a.lo, b.lo);
  const std::uint64_t overlap_hi = std::min(a.hi, b.hi);
  const std::uint64_t overlap =
      overlap_lo <= overlap_hi ? overlap_hi - overlap_lo + 1 : 0;
  const std::uint64_t unique_pairs =
      size_a * size_b - overlap - overlap * (overlap - (overlap > 0)) / 2;
  const std::uint64_t target = std::min<std::uint64_t>(n_pairs, unique_pairs);
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < target) {
    const std::size_t x = a.lo + rng.uniform_index(size_a);
    const std::size_t y = b.lo + rng.uniform_index(size_b);
    if (x == y) continue;
    const bool both_ways = contains(b, x) && contains(a, y);
    if (both_ways && rng.uniform01() >= 0.5) continue;
    const std::size_t lo = std::min(x, y);
    const std::size_t hi = std::max(x, y);
    if (!seen.insert((static_cast<std::uint64_t>(lo) << 32) | hi).second) {
      continue;
    }
    out.push_back(to_words(lo, hi));
  }
  return out;
}

std::optional<double> pearson(std::span<const double> xs,
                              std::span<const double> ys) {
  require(xs.size() == ys.size(), "pearson inputs differ in length");
  const std::size_t n = xs.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SimilarityReport similarity_correlation(const EmbeddingSnapshot& model_a,
                                        const EmbeddingSnapshot& model_b,
                                        std::span<const WordPair> pairs) {
  SimilarityReport report;
  report.pairs_sampled = pairs.size();
  std::vector<double> xs, ys;
  for (const auto& [w1, w2] : pairs) {
    const auto a1 = model_a.find(w1), a2 = model_a.find(w2);
    const auto b1 = model_b.find(w1), b2 = model_b.find(w2);
    if (!a1 || !a2 || !b1 || !b2) continue;
    const auto sa = cosine(*a1, *a2);
    const auto sb = cosine(*b1, *b2);
    if (!sa || !sb) continue;
    xs.push_back(*sa);
    ys.push_back(*sb);
    report.points.push_back({w1, w2, *sa, *sb});
  }
  report.defined_pairs = xs.size();
  report.undefined_fraction =
      pairs.empty() ? 0.0
                    : 1.0 - static_cast<double>(report.defined_pairs) /
                                static_cast<double>(report.pairs_sampled);
  report.pearson_r = pearson(xs, ys);
  return report;
}

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingSnapshot& model, std::string_view word, std::size_t n) {
  const auto query = model.find(word);
  if (!query) {
    fail(ErrorCode::kUnknownWord, "word not in model: " + std::string(word));
  }
  std::vector<std::pair<std::string, double>> scored;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (model.word(i) == word) continue;
    if (auto c = cosine(*query, model.vector(i))) {
      scored.emplace_back(model.word(i), *c);
    }
  }
  const std::size_t take = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    [](const auto& x, const auto& y) {
                      if (x.second != y.second) return x.second > y.second;
                      return x.first < y.first;
                    });
  scored.resize(take);
  return scored;
}

void write_similarity_csv(std::span<const SimilarityReport> reports,
                          std::ostream& out) {
  out << "bucket_a,bucket_b,word1,word2,sim_a,sim_b\n";
  for (const auto& report : reports) {
    const std::string ba = std::to_string(report.bucket_a.lo) + "-" +
                           std::to_string(report.bucket_a.hi);
    const std::string bb = std::to_string(report.bucket_b.lo) + "-" +
                           std::to_string(report.bucket_b.hi);
    for (const auto& p : report.points) {
      out << ba << ',' << bb << ',' << csv_field(p.word1) << ','
          << csv_field(p.word2) << ',' << format_real(p.similarity_a) << ','
          << format_real(p.similarity_b) << '\n';
    }
  }
  if (!out) fail(ErrorCode::kIo, "write failed");
}

}  // namespace ssvec
