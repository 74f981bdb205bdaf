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

#include "ssvec/ssvec.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ssvec/batch_trainer.hpp"
#include "ssvec/corpus.hpp"
#include "ssvec/error.hpp"
#include "ssvec/evaluation.hpp"
#include "ssvec/persistence.hpp"
#include "ssvec/stream_trainer.hpp"

struct ssvec_stream {
  ssvec::StreamModel model;
};

struct ssvec_batch {
  ssvec::BatchModel model;
};

struct ssvec_embeddings {
  ssvec::EmbeddingSnapshot snapshot;
};

struct ssvec_counts {
  ssvec::CountTable table;
};

struct ssvec_sketch {
  ssvec::SpaceSavingSketch sketch;
};

namespace {

thread_local std::string g_last_error;

ssvec_status set_error(ssvec_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
ssvec_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return SSVEC_OK;
  } catch (const ssvec::Error& e) {
    return set_error(static_cast<ssvec_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SSVEC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SSVEC_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(SSVEC_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) {
    ssvec::fail(ssvec::ErrorCode::kInvalidArgument,
                std::string(what) + " must not be NULL");
  }
}

ssvec::TrainerConfig to_core(const ssvec_config& c) {
  ssvec::TrainerConfig t;
  t.vocab_capacity = c.vocab_size;
  t.reservoir_capacity = c.reservoir_size;
  t.negatives = c.negatives;
  t.dim = c.dim;
  t.context_radius = c.window;
  t.subsample_threshold = c.subsample;
  t.dynamic_windows = c.dynamic_windows != 0;
  if (c.schedule != SSVEC_SCHEDULE_LINEAR &&
      c.schedule != SSVEC_SCHEDULE_POLYNOMIAL) {
    ssvec::fail(ssvec::ErrorCode::kInvalidArgument, "unknown schedule");
  }
  t.schedule.kind = static_cast<ssvec::ScheduleKind>(c.schedule);
  t.schedule.rho0 = c.lr;
  t.schedule.rho_min = c.lr_min;
  t.schedule.horizon = c.lr_horizon;
  t.schedule.tau = c.tau;
  t.schedule.kappa = c.kappa;
  t.seed = c.seed;
  t.max_sentence_len = c.max_sentence_len;
  t.validate();
  return t;
}

ssvec_config from_core(const ssvec::TrainerConfig& t) {
  ssvec_config c;
  c.vocab_size = t.vocab_capacity;
  c.reservoir_size = t.reservoir_capacity;
  c.negatives = t.negatives;
  c.dim = t.dim;
  c.window = t.context_radius;
  c.subsample = t.subsample_threshold;
  c.dynamic_windows = t.dynamic_windows ? 1 : 0;
  c.schedule = static_cast<ssvec_schedule>(t.schedule.kind);
  c.lr = t.schedule.rho0;
  c.lr_min = t.schedule.rho_min;
  c.lr_horizon = t.schedule.horizon;
  c.tau = t.schedule.tau;
  c.kappa = t.schedule.kappa;
  c.seed = t.seed;
  c.max_sentence_len = t.max_sentence_len;
  return c;
}

ssvec_stream_stats stats_of(const ssvec::StreamModel& m) {
  ssvec_stream_stats s;
  s.sentences = m.stats.sentences;
  s.tokens = m.stats.tokens;
  s.retained_tokens = m.stats.retained_tokens;
  s.ejections = m.stats.ejections;
  s.contexts_trained = m.stats.contexts_trained;
  s.contexts_skipped = m.stats.contexts_skipped;
  s.sketch_observed = m.sketch.observed();
  s.sketch_occupied = m.sketch.size();
  s.sketch_min_count = m.sketch.min_count();
  s.reservoir_seen = m.negatives.seen();
  s.reservoir_stored = m.negatives.size();
  return s;
}

// Runs `write` on the named file, or on stdout for "-".
template <typename Write>
void write_output(const char* path, Write&& write) {
  if (std::string_view(path) == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) ssvec::fail(ssvec::ErrorCode::kIo, "write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    ssvec::fail(ssvec::ErrorCode::kIo, std::string("cannot write ") + path);
  }
  write(out);
  out.close();
  if (!out) ssvec::fail(ssvec::ErrorCode::kIo, std::string("write failed: ") + path);
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

extern "C" {

const char* ssvec_last_error(void) { return g_last_error.c_str(); }

const char* ssvec_status_string(ssvec_status status) {
  switch (status) {
    case SSVEC_OK: return "ok";
    case SSVEC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SSVEC_ERR_IO: return "i/o error";
    case SSVEC_ERR_ENCODING: return "invalid encoding";
    case SSVEC_ERR_FORMAT: return "bad file format";
    case SSVEC_ERR_VERSION: return "unsupported version";
    case SSVEC_ERR_CORRUPT: return "corrupt data";
    case SSVEC_ERR_UNKNOWN_WORD: return "unknown word";
    case SSVEC_ERR_INTERNAL: return "internal error";
  }
  return "unrecognized status";
}

void ssvec_config_default(ssvec_config* config) {
  if (config != nullptr) *config = from_core(ssvec::TrainerConfig{});
}

void ssvec_batch_options_default(ssvec_batch_options* options) {
  if (options == nullptr) return;
  const ssvec::BatchOptions d;
  options->epochs = d.epochs;
  options->min_count = d.min_count;
  options->table_size = d.table_size;
  options->max_vocab = d.max_vocab;
}

ssvec_status ssvec_stream_create(const ssvec_config* config,
                                 ssvec_stream** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = new ssvec_stream{ssvec::StreamModel(to_core(*config))};
  });
}

void ssvec_stream_destroy(ssvec_stream* model) { delete model; }

ssvec_status ssvec_stream_train_file(ssvec_stream* model, const char* path,
                                     ssvec_progress_fn progress,
                                     uint64_t progress_interval,
                                     void* user_data) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    ssvec::InputFile input(path);
    ssvec::ProgressOptions options;
    if (progress != nullptr) {
      options.interval_tokens = progress_interval;
      options.callback = [&](const ssvec::StreamModel& m) {
        const ssvec_stream_stats s = stats_of(m);
        progress(&s, user_data);
      };
    }
    ssvec::train_stream(model->model, input.stream(), options);
  });
}

ssvec_status ssvec_stream_train_text(ssvec_stream* model, const char* text,
                                     size_t len) {
  return guarded([&] {
    need(model, "model");
    if (len > 0) need(text, "text");
    std::istringstream in(std::string(text == nullptr ? "" : text, len));
    ssvec::train_stream(model->model, in);
  });
}

ssvec_status ssvec_stream_stats_get(const ssvec_stream* model,
                                    ssvec_stream_stats* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = stats_of(model->model);
  });
}

ssvec_status ssvec_stream_config_get(const ssvec_stream* model,
                                     ssvec_config* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = from_core(model->model.config);
  });
}

ssvec_status ssvec_stream_save(const ssvec_stream* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    ssvec::save_checkpoint(model->model, path);
  });
}

ssvec_status ssvec_stream_load(const char* path, ssvec_stream** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ssvec_stream{ssvec::load_checkpoint(path)};
  });
}

ssvec_status ssvec_stream_sketch(const ssvec_stream* model,
                                 ssvec_sketch** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new ssvec_sketch{model->model.sketch};
  });
}

ssvec_status ssvec_stream_snapshot(const ssvec_stream* model,
                                   ssvec_embeddings** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new ssvec_embeddings{ssvec::EmbeddingSnapshot::of(model->model)};
  });
}

ssvec_status ssvec_batch_train_file(const ssvec_config* config,
                                    const ssvec_batch_options* options,
                                    const char* path, ssvec_batch** out) {
  return guarded([&] {
    need(config, "config");
    need(options, "options");
    need(path, "path");
    need(out, "out");
    const ssvec::TrainerConfig core = to_core(*config);
    ssvec::BatchOptions opts;
    opts.epochs = options->epochs;
    opts.min_count = options->min_count;
    opts.table_size = options->table_size;
    opts.max_vocab = options->max_vocab;
    std::unique_ptr<ssvec::CorpusSource> source;
    if (std::string(path) == "-") {
      std::string text((std::istreambuf_iterator<char>(std::cin)),
                       std::istreambuf_iterator<char>());
      source = std::make_unique<ssvec::MemorySource>(std::move(text));
    } else {
      source = std::make_unique<ssvec::FileSource>(path);
    }
    *out = new ssvec_batch{ssvec::train_batch_model(*source, core, opts)};
  });
}

void ssvec_batch_destroy(ssvec_batch* model) { delete model; }

ssvec_status ssvec_batch_save(const ssvec_batch* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    ssvec::save_batch_model(model->model, path);
  });
}

ssvec_status ssvec_batch_load(const char* path, ssvec_batch** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ssvec_batch{ssvec::load_batch_model(path)};
  });
}

ssvec_status ssvec_batch_vocab_size(const ssvec_batch* model, uint64_t* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = model->model.vocab.size();
  });
}

ssvec_status ssvec_batch_write_vocab(const ssvec_batch* model,
                                     const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    write_output(path, [&](std::ostream& out) {
      ssvec::write_vocab_tsv(model->model.vocab, out);
    });
  });
}

ssvec_status ssvec_batch_snapshot(const ssvec_batch* model,
                                  ssvec_embeddings** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new ssvec_embeddings{ssvec::EmbeddingSnapshot::of(model->model)};
  });
}

ssvec_status ssvec_embeddings_load(const char* path, ssvec_embeddings** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ssvec_embeddings{ssvec::load_snapshot(path)};
  });
}

void ssvec_embeddings_destroy(ssvec_embeddings* emb) { delete emb; }

uint64_t ssvec_embeddings_count(const ssvec_embeddings* emb) {
  return emb == nullptr ? 0 : emb->snapshot.size();
}

uint64_t ssvec_embeddings_dim(const ssvec_embeddings* emb) {
  return emb == nullptr ? 0 : emb->snapshot.dim();
}

ssvec_status ssvec_embeddings_export(const ssvec_embeddings* emb,
                                     const char* path) {
  return guarded([&] {
    need(emb, "embeddings");
    need(path, "path");
    ssvec::export_embeddings(emb->snapshot, path);
  });
}

ssvec_status ssvec_embeddings_neighbors(const ssvec_embeddings* emb,
                                        const char* word, ssvec_neighbor* out,
                                        size_t capacity, size_t* count) {
  return guarded([&] {
    need(emb, "embeddings");
    need(word, "word");
    need(count, "count");
    if (capacity > 0) need(out, "out");
    *count = 0;
    const auto& snap = emb->snapshot;
    const auto neighbors = ssvec::nearest_neighbors(snap, word, capacity);
    for (const auto& [w, c] : neighbors) {
      // Point into the snapshot's own storage so the string outlives this
      // call.
      out[*count] = ssvec_neighbor{snap.word(*snap.index_of(w)).c_str(), c};
      ++*count;
    }
  });
}

ssvec_status ssvec_counts_from_file(const char* path, ssvec_counts** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    ssvec::InputFile input(path);
    *out = new ssvec_counts{ssvec::exact_counts(input.stream())};
  });
}

void ssvec_counts_destroy(ssvec_counts* counts) { delete counts; }

ssvec_status ssvec_counts_size(const ssvec_counts* counts, uint64_t* types,
                               uint64_t* tokens) {
  return guarded([&] {
    need(counts, "counts");
    if (types != nullptr) *types = counts->table.entries.size();
    if (tokens != nullptr) *tokens = counts->table.total;
  });
}

ssvec_status ssvec_counts_write_tsv(const ssvec_counts* counts,
                                    const char* path) {
  return guarded([&] {
    need(counts, "counts");
    need(path, "path");
    write_output(path, [&](std::ostream& out) {
      ssvec::write_counts_tsv(counts->table, out);
    });
  });
}

ssvec_status ssvec_sketch_build(const char* path, uint64_t capacity,
                                ssvec_sketch** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    ssvec::InputFile input(path);
    *out = new ssvec_sketch{ssvec::sketch_corpus(input.stream(), capacity)};
  });
}

void ssvec_sketch_destroy(ssvec_sketch* sketch) { delete sketch; }

ssvec_status ssvec_sketch_load(const char* path, ssvec_sketch** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    ssvec::InputFile input(path);
    *out = new ssvec_sketch{ssvec::SpaceSavingSketch::read_tsv(input.stream())};
  });
}

ssvec_status ssvec_sketch_write(const ssvec_sketch* sketch, const char* path) {
  return guarded([&] {
    need(sketch, "sketch");
    need(path, "path");
    write_output(path, [&](std::ostream& out) { sketch->sketch.write_tsv(out); });
  });
}

ssvec_status ssvec_sketch_estimate(const ssvec_sketch* sketch, const char* word,
                                   uint64_t* count, int* resident) {
  return guarded([&] {
    need(sketch, "sketch");
    need(word, "word");
    need(count, "count");
    const auto slot = sketch->sketch.slot_of(word);
    *count = slot ? sketch->sketch.count_at(*slot) : 0;
    if (resident != nullptr) *resident = slot ? 1 : 0;
  });
}

ssvec_status ssvec_sketch_count_errors(const ssvec_sketch* sketch,
                                       const ssvec_counts* truth,
                                       ssvec_count_mode mode,
                                       const char* csv_path,
                                       ssvec_count_summary* out) {
  return guarded([&] {
    need(sketch, "sketch");
    need(truth, "truth");
    if (mode != SSVEC_COUNTS_IMPUTE && mode != SSVEC_COUNTS_OMIT) {
      ssvec::fail(ssvec::ErrorCode::kInvalidArgument, "unknown count mode");
    }
    if (truth->table.entries.empty()) {
      ssvec::fail(ssvec::ErrorCode::kInvalidArgument, "empty truth counts");
    }
    const auto report = ssvec::count_error_report(
        sketch->sketch, truth->table,
        mode == SSVEC_COUNTS_IMPUTE ? ssvec::CountErrorMode::kImpute
                                    : ssvec::CountErrorMode::kOmit);
    if (csv_path != nullptr) {
      write_output(csv_path, [&](std::ostream& csv) { report.write_csv(csv); });
    }
    if (out != nullptr) {
      std::vector<double> errors;
      ssvec_count_summary s{report.rows.size(), 0, 0.0};
      for (const auto& row : report.rows) {
        if (sketch->sketch.slot_of(row.word)) ++s.resident_words;
        if (row.relative_error) errors.push_back(*row.relative_error);
      }
      s.median_relative_error = median(errors);
      *out = s;
    }
  });
}

ssvec_status ssvec_similarity_eval(
    const ssvec_embeddings* model_a, const ssvec_embeddings* model_b,
    const ssvec_counts* truth, const ssvec_rank_interval* buckets,
    size_t n_buckets, uint64_t n_pairs, uint64_t seed, const char* csv_path,
    ssvec_similarity_summary* out, size_t capacity, size_t* count) {
  return guarded([&] {
    need(model_a, "model_a");
    need(model_b, "model_b");
    need(buckets, "buckets");
    need(count, "count");
    if (n_buckets == 0) {
      ssvec::fail(ssvec::ErrorCode::kInvalidArgument, "no buckets given");
    }
    const std::size_t n_reports = n_buckets * (n_buckets + 1) / 2;
    if (capacity < n_reports) {
      ssvec::fail(ssvec::ErrorCode::kInvalidArgument,
                  "summary buffer too small");
    }
    need(out, "out");

    std::vector<std::string> ranked;
    if (truth != nullptr) {
      for (auto& [w, c] : ssvec::rank_by_frequency(truth->table)) {
        ranked.push_back(std::move(w));
      }
    } else {
      const auto& snap = model_b->snapshot;
      for (std::size_t i = 0; i < snap.size(); ++i) ranked.push_back(snap.word(i));
    }

    ssvec::Rng rng(seed);
    std::vector<ssvec::SimilarityReport> reports;
    for (std::size_t i = 0; i < n_buckets; ++i) {
      for (std::size_t j = i; j < n_buckets; ++j) {
        const ssvec::RankInterval a{buckets[i].lo, buckets[i].hi};
        const ssvec::RankInterval b{buckets[j].lo, buckets[j].hi};
        const auto pairs = ssvec::sample_bucket_pairs(ranked, a, b, n_pairs, rng);
        auto report = ssvec::similarity_correlation(model_a->snapshot,
                                                    model_b->snapshot, pairs);
        report.bucket_a = a;
        report.bucket_b = b;
        reports.push_back(std::move(report));
      }
    }
    if (csv_path != nullptr) {
      write_output(csv_path, [&](std::ostream& csv) {
        ssvec::write_similarity_csv(reports, csv);
      });
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      out[i] = ssvec_similarity_summary{
          {r.bucket_a.lo, r.bucket_a.hi},
          {r.bucket_b.lo, r.bucket_b.hi},
          r.pairs_sampled,
          r.defined_pairs,
          r.undefined_fraction,
          r.pearson_r.has_value() ? 1 : 0,
          r.pearson_r.value_or(0.0)};
    }
    *count = reports.size();
  });
}

}  // extern "C"
