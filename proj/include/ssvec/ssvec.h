/*
 *  Copyright 2026 The ssvec Authors. All Rights Reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

/*
 * C interface to libssvec: one-pass bounded-memory word embeddings
 * (space-saving vocabulary + reservoir negative sampling), a two-pass
 * word2vec-style reference trainer, and intrinsic evaluation.
 *
 * Every function returning ssvec_status reports failures through the status
 * code; ssvec_last_error() then describes the most recent failure on the
 * calling thread. Handles are opaque and owned by the caller, who releases
 * them with the matching *_destroy function. Passing NULL to a destroy
 * function is a no-op.
 */

#ifndef SSVEC_SSVEC_H_
#define SSVEC_SSVEC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SSVEC_BUILDING)
#    define SSVEC_API __declspec(dllexport)
#  else
#    define SSVEC_API __declspec(dllimport)
#  endif
#else
#  define SSVEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssvec_status {
  SSVEC_OK = 0,
  SSVEC_ERR_INVALID_ARGUMENT = 1,
  SSVEC_ERR_IO = 2,
  SSVEC_ERR_ENCODING = 3,
  SSVEC_ERR_FORMAT = 4,
  SSVEC_ERR_VERSION = 5,
  SSVEC_ERR_CORRUPT = 6,
  SSVEC_ERR_UNKNOWN_WORD = 7,
  SSVEC_ERR_INTERNAL = 99
} ssvec_status;

typedef enum ssvec_schedule {
  SSVEC_SCHEDULE_LINEAR = 0,
  SSVEC_SCHEDULE_POLYNOMIAL = 1
} ssvec_schedule;

typedef enum ssvec_count_mode {
  SSVEC_COUNTS_IMPUTE = 0,
  SSVEC_COUNTS_OMIT = 1
} ssvec_count_mode;

typedef struct ssvec_config {
  uint64_t vocab_size;       /* K: sketch slots */
  uint64_t reservoir_size;   /* N: negative-sampling reservoir */
  uint32_t negatives;        /* S */
  uint32_t dim;              /* D */
  uint32_t window;           /* C: context radius */
  double subsample;          /* delta */
  int dynamic_windows;       /* nonzero: radius uniform on 1..C */
  ssvec_schedule schedule;
  double lr;                 /* rho0 */
  double lr_min;             /* floor */
  double lr_horizon;         /* linear decay length in per-slot steps */
  double tau;                /* polynomial offset */
  double kappa;              /* polynomial exponent */
  uint64_t seed;
  uint64_t max_sentence_len; /* newline-free input is cut into chunks */
} ssvec_config;

typedef struct ssvec_batch_options {
  uint32_t epochs;
  uint64_t min_count;
  uint64_t table_size;
  uint64_t max_vocab; /* 0: keep every word with count >= min_count */
} ssvec_batch_options;

typedef struct ssvec_stream_stats {
  uint64_t sentences;
  uint64_t tokens;
  uint64_t retained_tokens;
  uint64_t ejections;
  uint64_t contexts_trained;
  uint64_t contexts_skipped;
  uint64_t sketch_observed;
  uint64_t sketch_occupied;
  uint64_t sketch_min_count;
  uint64_t reservoir_seen;
  uint64_t reservoir_stored;
} ssvec_stream_stats;

typedef struct ssvec_rank_interval {
  uint64_t lo; /* 1-based, inclusive */
  uint64_t hi;
} ssvec_rank_interval;

typedef struct ssvec_similarity_summary {
  ssvec_rank_interval bucket_a;
  ssvec_rank_interval bucket_b;
  uint64_t pairs_sampled;
  uint64_t defined_pairs;
  double undefined_fraction;
  int pearson_defined;
  double pearson_r;
} ssvec_similarity_summary;

typedef struct ssvec_count_summary {
  uint64_t words;
  uint64_t resident_words;
  double median_relative_error; /* over words with an estimate; 0 if none */
} ssvec_count_summary;

typedef struct ssvec_neighbor {
  const char* word; /* valid while the embeddings handle lives */
  double cosine;
} ssvec_neighbor;

typedef struct ssvec_stream ssvec_stream;
typedef struct ssvec_batch ssvec_batch;
typedef struct ssvec_embeddings ssvec_embeddings;
typedef struct ssvec_counts ssvec_counts;
typedef struct ssvec_sketch ssvec_sketch;

typedef void (*ssvec_progress_fn)(const ssvec_stream_stats* stats,
                                  void* user_data);

SSVEC_API const char* ssvec_last_error(void);
SSVEC_API const char* ssvec_status_string(ssvec_status status);

/* Fills the recommended defaults (K=100000, N=1e8, S=5, D=100, C=2,
 * delta=1e-3, dynamic windows, linear rate 2.5e-2 -> 2.5e-6). */
SSVEC_API void ssvec_config_default(ssvec_config* config);
SSVEC_API void ssvec_batch_options_default(ssvec_batch_options* options);

/* ---- streaming trainer ------------------------------------------------ */

SSVEC_API ssvec_status ssvec_stream_create(const ssvec_config* config,
                                           ssvec_stream** out);
SSVEC_API void ssvec_stream_destroy(ssvec_stream* model);

/* Trains on a UTF-8 text file, one pass; path "-" reads stdin. The progress
 * callback (may be NULL) fires every progress_interval input tokens. */
SSVEC_API ssvec_status ssvec_stream_train_file(ssvec_stream* model,
                                               const char* path,
                                               ssvec_progress_fn progress,
                                               uint64_t progress_interval,
                                               void* user_data);
SSVEC_API ssvec_status ssvec_stream_train_text(ssvec_stream* model,
                                               const char* text, size_t len);

SSVEC_API ssvec_status ssvec_stream_stats_get(const ssvec_stream* model,
                                              ssvec_stream_stats* out);
SSVEC_API ssvec_status ssvec_stream_config_get(const ssvec_stream* model,
                                               ssvec_config* out);

SSVEC_API ssvec_status ssvec_stream_save(const ssvec_stream* model,
                                         const char* path);
SSVEC_API ssvec_status ssvec_stream_load(const char* path, ssvec_stream** out);

/* Copies the model's vocabulary sketch. It counts retained (post-subsampling)
 * tokens only. */
SSVEC_API ssvec_status ssvec_stream_sketch(const ssvec_stream* model,
                                           ssvec_sketch** out);

SSVEC_API ssvec_status ssvec_stream_snapshot(const ssvec_stream* model,
                                             ssvec_embeddings** out);

/* ---- batch trainer ---------------------------------------------------- */

/* Builds the vocabulary and negative table from `path` and trains; the file
 * is re-read once per epoch, so it must be a regular file (or "-", which is
 * buffered in memory first). */
SSVEC_API ssvec_status ssvec_batch_train_file(const ssvec_config* config,
                                              const ssvec_batch_options* options,
                                              const char* path,
                                              ssvec_batch** out);
SSVEC_API void ssvec_batch_destroy(ssvec_batch* model);
SSVEC_API ssvec_status ssvec_batch_save(const ssvec_batch* model,
                                        const char* path);
SSVEC_API ssvec_status ssvec_batch_load(const char* path, ssvec_batch** out);
SSVEC_API ssvec_status ssvec_batch_vocab_size(const ssvec_batch* model,
                                              uint64_t* out);
SSVEC_API ssvec_status ssvec_batch_write_vocab(const ssvec_batch* model,
                                               const char* path);
SSVEC_API ssvec_status ssvec_batch_snapshot(const ssvec_batch* model,
                                            ssvec_embeddings** out);

/* ---- embeddings ------------------------------------------------------- */

/* Loads a stream checkpoint, a batch model or a text embedding file. */
SSVEC_API ssvec_status ssvec_embeddings_load(const char* path,
                                             ssvec_embeddings** out);
SSVEC_API void ssvec_embeddings_destroy(ssvec_embeddings* emb);
SSVEC_API uint64_t ssvec_embeddings_count(const ssvec_embeddings* emb);
SSVEC_API uint64_t ssvec_embeddings_dim(const ssvec_embeddings* emb);
SSVEC_API ssvec_status ssvec_embeddings_export(const ssvec_embeddings* emb,
                                               const char* path);

/* Writes up to `capacity` neighbors of `word` into `out`; *count receives
 * the number written. */
SSVEC_API ssvec_status ssvec_embeddings_neighbors(const ssvec_embeddings* emb,
                                                  const char* word,
                                                  ssvec_neighbor* out,
                                                  size_t capacity,
                                                  size_t* count);

/* ---- exact counts and evaluation -------------------------------------- */

SSVEC_API ssvec_status ssvec_counts_from_file(const char* path,
                                              ssvec_counts** out);
SSVEC_API void ssvec_counts_destroy(ssvec_counts* counts);
SSVEC_API ssvec_status ssvec_counts_size(const ssvec_counts* counts,
                                         uint64_t* types, uint64_t* tokens);
/* word<TAB>count lines, descending count, ties by word. */
SSVEC_API ssvec_status ssvec_counts_write_tsv(const ssvec_counts* counts,
                                              const char* path);

/* ---- space-saving sketches -------------------------------------------- */

/* Counts every token of `path` ("-": stdin) with a `capacity`-slot sketch. */
SSVEC_API ssvec_status ssvec_sketch_build(const char* path, uint64_t capacity,
                                          ssvec_sketch** out);
SSVEC_API void ssvec_sketch_destroy(ssvec_sketch* sketch);
/* TSV: "#space-saving<TAB>K<TAB>observed" then slot, word, count rows. */
SSVEC_API ssvec_status ssvec_sketch_load(const char* path, ssvec_sketch** out);
SSVEC_API ssvec_status ssvec_sketch_write(const ssvec_sketch* sketch,
                                          const char* path);
SSVEC_API ssvec_status ssvec_sketch_estimate(const ssvec_sketch* sketch,
                                             const char* word,
                                             uint64_t* count, int* resident);

/* Sketch count error against exact counts; writes rank,word,true,est,rel_err
 * CSV when csv_path is non-NULL ("-": stdout). */
SSVEC_API ssvec_status ssvec_sketch_count_errors(const ssvec_sketch* sketch,
                                                 const ssvec_counts* truth,
                                                 ssvec_count_mode mode,
                                                 const char* csv_path,
                                                 ssvec_count_summary* out);

/* Compares cosine similarities of word pairs under two models. For every
 * unordered pair of buckets (including a bucket with itself) up to n_pairs
 * word pairs are sampled by frequency rank. Ranks come from `truth` when
 * given, else from model_b's word order. One summary per bucket pair is
 * written to `out` (capacity must be >= n_buckets * (n_buckets + 1) / 2);
 * points go to csv_path when non-NULL. */
SSVEC_API ssvec_status ssvec_similarity_eval(
    const ssvec_embeddings* model_a, const ssvec_embeddings* model_b,
    const ssvec_counts* truth, const ssvec_rank_interval* buckets,
    size_t n_buckets, uint64_t n_pairs, uint64_t seed, const char* csv_path,
    ssvec_similarity_summary* out, size_t capacity, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* SSVEC_SSVEC_H_ */
