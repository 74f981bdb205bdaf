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

// Command-line front end over the C API.

#include <cinttypes>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssvec/ssvec.h"

namespace {

constexpr const char* kDefaultBuckets = "1-100,1601-1700,6401-6500";

// Raised after a C API call fails; main() prints the library's message.
struct ApiFailure : std::runtime_error {
  ssvec_status status;
  ApiFailure(ssvec_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
};

void check(ssvec_status status) {
  if (status != SSVEC_OK) throw ApiFailure(status, ssvec_last_error());
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using StreamPtr = std::unique_ptr<ssvec_stream, Deleter<ssvec_stream, ssvec_stream_destroy>>;
using BatchPtr = std::unique_ptr<ssvec_batch, Deleter<ssvec_batch, ssvec_batch_destroy>>;
using EmbeddingsPtr =
    std::unique_ptr<ssvec_embeddings, Deleter<ssvec_embeddings, ssvec_embeddings_destroy>>;
using CountsPtr = std::unique_ptr<ssvec_counts, Deleter<ssvec_counts, ssvec_counts_destroy>>;
using SketchPtr = std::unique_ptr<ssvec_sketch, Deleter<ssvec_sketch, ssvec_sketch_destroy>>;

EmbeddingsPtr load_embeddings(const std::string& path) {
  ssvec_embeddings* raw = nullptr;
  check(ssvec_embeddings_load(path.c_str(), &raw));
  return EmbeddingsPtr(raw);
}

SketchPtr checkpoint_sketch(const std::string& path) {
  ssvec_stream* raw = nullptr;
  check(ssvec_stream_load(path.c_str(), &raw));
  StreamPtr model(raw);
  ssvec_sketch* sketch = nullptr;
  check(ssvec_stream_sketch(model.get(), &sketch));
  return SketchPtr(sketch);
}

CountsPtr load_counts(const std::string& path) {
  ssvec_counts* raw = nullptr;
  check(ssvec_counts_from_file(path.c_str(), &raw));
  return CountsPtr(raw);
}

struct ConfigFlags {
  ssvec_config config{};
  bool dynamic = true;
  std::string schedule = "linear";
  std::uint64_t vocab_cap = 0;  // train-batch only
  std::vector<CLI::Option*> options;
};

// Registers trainer hyperparameters. The batch trainer has no reservoir and
// uses one global linear rate, so it gets a subset; there --vocab-size caps
// the vocabulary instead of sizing a sketch.
void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool stream) {
  ssvec_config_default(&f.config);
  f.dynamic = f.config.dynamic_windows != 0;
  auto& c = f.config;
  auto add = [&](CLI::Option* o) { f.options.push_back(o->capture_default_str()); };
  if (stream) {
    add(cmd->add_option("--vocab-size", c.vocab_size, "Sketch capacity K")
            ->check(CLI::PositiveNumber));
    add(cmd->add_option("--reservoir-size", c.reservoir_size,
                        "Negative-sampling reservoir size N")
            ->check(CLI::PositiveNumber));
  } else {
    add(cmd->add_option("--vocab-size", f.vocab_cap,
                        "Keep only the K most frequent words (0: no cap)"));
  }
  add(cmd->add_option("--negatives", c.negatives, "Negative samples per context S"));
  add(cmd->add_option("--dim", c.dim, "Embedding dimension D")
          ->check(CLI::PositiveNumber));
  add(cmd->add_option("--window", c.window, "Context radius C")
          ->check(CLI::PositiveNumber));
  add(cmd->add_option("--subsample", c.subsample, "Subsampling threshold")
          ->check(CLI::PositiveNumber));
  f.options.push_back(cmd->add_flag("--dynamic-windows,!--no-dynamic-windows",
                                    f.dynamic,
                                    "Draw the context radius uniformly from 1..C "
                                    "(default: on)"));
  add(cmd->add_option("--lr", c.lr, "Initial learning rate"));
  add(cmd->add_option("--lr-min", c.lr_min, "Learning-rate floor"));
  if (stream) {
    add(cmd->add_option("--lr-horizon", c.lr_horizon,
                        "Per-slot steps over which the linear rate decays"));
    add(cmd->add_option("--schedule", f.schedule, "Learning-rate schedule")
            ->check(CLI::IsMember({"linear", "poly"})));
    add(cmd->add_option("--tau", c.tau, "Polynomial schedule offset"));
    add(cmd->add_option("--kappa", c.kappa, "Polynomial schedule exponent"));
  }
  add(cmd->add_option("--seed", c.seed, "Random seed"));
  add(cmd->add_option("--max-sentence-len", c.max_sentence_len,
                      "Split longer lines into chunks of this many tokens")
          ->check(CLI::PositiveNumber));
}

void print_stats(const ssvec_stream_stats& s, std::FILE* to) {
  std::fprintf(to,
               "sentences=%" PRIu64 " tokens=%" PRIu64 " retained=%" PRIu64
               " ejections=%" PRIu64 " contexts_trained=%" PRIu64
               " contexts_skipped=%" PRIu64 " sketch_min=%" PRIu64 "\n",
               s.sentences, s.tokens, s.retained_tokens, s.ejections,
               s.contexts_trained, s.contexts_skipped, s.sketch_min_count);
}

void report_progress(const ssvec_stream_stats* stats, void*) {
  print_stats(*stats, stderr);
}

std::vector<ssvec_rank_interval> parse_buckets(const std::string& spec) {
  std::vector<ssvec_rank_interval> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string item = spec.substr(pos, comma - pos);
    const std::size_t dash = item.find('-');
    std::size_t used_lo = 0, used_hi = 0;
    ssvec_rank_interval r{0, 0};
    try {
      if (dash == std::string::npos) throw std::invalid_argument(item);
      const std::string lo = item.substr(0, dash), hi = item.substr(dash + 1);
      r.lo = std::stoull(lo, &used_lo);
      r.hi = std::stoull(hi, &used_hi);
      if (used_lo != lo.size() || used_hi != hi.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--buckets", "expected lo-hi[,lo-hi...], got '" + item + "'");
    }
    if (r.lo < 1 || r.lo > r.hi) {
      throw CLI::ValidationError("--buckets", "bad rank interval '" + item + "'");
    }
    out.push_back(r);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-memory streaming word embeddings"};
  app.name("ssvec");
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);

  // train-stream
  ConfigFlags stream_flags;
  std::string stream_input, stream_ckpt_out, resume;
  std::uint64_t progress_every = 0;
  auto* ts = app.add_subcommand("train-stream", "One-pass training with a bounded vocabulary");
  ts->add_option("--input", stream_input, "Training text, '-' for stdin")->required();
  add_config_flags(ts, stream_flags, true);
  ts->add_option("--checkpoint-out", stream_ckpt_out, "Write the trained model here");
  auto* resume_opt =
      ts->add_option("--resume", resume, "Continue training from a checkpoint");
  for (auto* o : stream_flags.options) resume_opt->excludes(o);
  ts->add_option("--progress", progress_every,
                 "Report statistics on stderr every this many tokens (0: never)");

  // train-batch
  ConfigFlags batch_flags;
  ssvec_batch_options batch_opts{};
  ssvec_batch_options_default(&batch_opts);
  std::string batch_input, batch_out, vocab_out;
  auto* tb = app.add_subcommand("train-batch", "Two-pass reference training");
  tb->add_option("--input", batch_input, "Training text, '-' for stdin")->required();
  add_config_flags(tb, batch_flags, false);
  tb->add_option("--epochs", batch_opts.epochs, "Passes over the input")
      ->capture_default_str();
  tb->add_option("--min-count", batch_opts.min_count, "Drop rarer words")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tb->add_option("--table-size", batch_opts.table_size, "Negative table length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tb->add_option("--checkpoint-out", batch_out, "Write the trained model here");
  tb->add_option("--vocab-out", vocab_out, "Write the vocabulary as TSV");

  // eval-counts
  std::string ec_ckpt, ec_sketch, ec_truth, ec_csv;
  std::string ec_mode = "impute";
  auto* ec = app.add_subcommand("eval-counts", "Sketch count error against exact counts");
  auto* ec_ckpt_opt = ec->add_option(
      "--checkpoint", ec_ckpt, "Stream checkpoint (its sketch saw subsampled tokens)");
  auto* ec_sketch_opt =
      ec->add_option("--sketch", ec_sketch, "Sketch TSV written by 'ssvec sketch'");
  ec_ckpt_opt->excludes(ec_sketch_opt);
  ec->add_option("--truth-corpus", ec_truth, "Corpus for exact counts")->required();
  ec->add_option("--mode", ec_mode, "Treatment of non-resident words")
      ->check(CLI::IsMember({"impute", "omit"}))
      ->capture_default_str();
  ec->add_option("--csv-out", ec_csv, "Per-word report");

  // eval-sim
  std::string es_a, es_b, es_buckets = kDefaultBuckets, es_csv, es_truth;
  std::uint64_t es_pairs = 1000, es_seed = 1;
  auto* es = app.add_subcommand("eval-sim", "Agreement of cosine similarities");
  es->add_option("--model-a", es_a, "Checkpoint, batch model or text embeddings")
      ->required();
  es->add_option("--model-b", es_b, "Checkpoint, batch model or text embeddings")
      ->required();
  es->add_option("--buckets", es_buckets, "Frequency-rank buckets lo-hi,...")
      ->capture_default_str();
  es->add_option("--pairs", es_pairs, "Word pairs per bucket pair")
      ->capture_default_str();
  es->add_option("--seed", es_seed, "Pair sampling seed")->capture_default_str();
  es->add_option("--csv-out", es_csv, "Per-pair similarities");
  es->add_option("--truth-corpus", es_truth,
                 "Rank words by exact counts from this corpus (default: model-b order)");

  // neighbors
  std::string nb_model, nb_word;
  std::size_t nb_top = 10;
  auto* nb = app.add_subcommand("neighbors", "Nearest words by cosine");
  nb->add_option("--model", nb_model, "Checkpoint, batch model or text embeddings")
      ->required();
  nb->add_option("--word", nb_word, "Query word")->required();
  nb->add_option("--top-n", nb_top, "Number of neighbors")->capture_default_str();

  // export
  std::string ex_model, ex_out;
  auto* ex = app.add_subcommand("export", "Write embeddings in text format");
  ex->add_option("--model", ex_model, "Checkpoint, batch model or text embeddings")
      ->required();
  ex->add_option("--out", ex_out, "Output file")->required();

  // counts
  std::string ct_input, ct_out = "-";
  auto* ct = app.add_subcommand("counts", "Exact word counts as TSV");
  ct->add_option("--input", ct_input, "Text, '-' for stdin")->required();
  ct->add_option("--out", ct_out, "Output file, '-' for stdout")->capture_default_str();

  // sketch
  std::string sk_ckpt, sk_input, sk_out = "-";
  std::uint64_t sk_capacity = 0;
  auto* sk = app.add_subcommand(
      "sketch", "Count a corpus with a space-saving sketch, or dump a checkpoint's");
  auto* sk_ckpt_opt = sk->add_option("--checkpoint", sk_ckpt, "Stream checkpoint");
  auto* sk_input_opt = sk->add_option("--input", sk_input, "Text, '-' for stdin");
  auto* sk_k_opt = sk->add_option("--vocab-size", sk_capacity, "Sketch capacity K")
                       ->check(CLI::PositiveNumber);
  sk_ckpt_opt->excludes(sk_input_opt)->excludes(sk_k_opt);
  sk_input_opt->needs(sk_k_opt);
  sk_k_opt->needs(sk_input_opt);
  sk->add_option("--out", sk_out, "Output file, '-' for stdout")->capture_default_str();

  std::vector<ssvec_rank_interval> buckets;
  try {
    app.parse(argc, argv);
    if (*es) buckets = parse_buckets(es_buckets);
    if (*ec && ec_ckpt.empty() && ec_sketch.empty()) {
      throw CLI::RequiredError("--checkpoint or --sketch");
    }
    if (*sk && sk_ckpt.empty() && sk_input.empty()) {
      throw CLI::RequiredError("--checkpoint or --input with --vocab-size");
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ts) {
      ssvec_stream* raw = nullptr;
      if (!resume.empty()) {
        check(ssvec_stream_load(resume.c_str(), &raw));
      } else {
        stream_flags.config.dynamic_windows = stream_flags.dynamic ? 1 : 0;
        stream_flags.config.schedule = stream_flags.schedule == "poly"
                                           ? SSVEC_SCHEDULE_POLYNOMIAL
                                           : SSVEC_SCHEDULE_LINEAR;
        check(ssvec_stream_create(&stream_flags.config, &raw));
      }
      StreamPtr model(raw);
      check(ssvec_stream_train_file(model.get(), stream_input.c_str(),
                                    progress_every > 0 ? report_progress : nullptr,
                                    progress_every, nullptr));
      if (!stream_ckpt_out.empty()) {
        check(ssvec_stream_save(model.get(), stream_ckpt_out.c_str()));
      }
      ssvec_stream_stats stats{};
      check(ssvec_stream_stats_get(model.get(), &stats));
      print_stats(stats, stdout);
    } else if (*tb) {
      batch_flags.config.dynamic_windows = batch_flags.dynamic ? 1 : 0;
      batch_opts.max_vocab = batch_flags.vocab_cap;
      ssvec_batch* raw = nullptr;
      check(ssvec_batch_train_file(&batch_flags.config, &batch_opts,
                                   batch_input.c_str(), &raw));
      BatchPtr model(raw);
      if (!batch_out.empty()) check(ssvec_batch_save(model.get(), batch_out.c_str()));
      if (!vocab_out.empty()) {
        check(ssvec_batch_write_vocab(model.get(), vocab_out.c_str()));
      }
      std::uint64_t vocab = 0;
      check(ssvec_batch_vocab_size(model.get(), &vocab));
      std::printf("vocab=%" PRIu64 "\n", vocab);
    } else if (*ec) {
      SketchPtr sketch;
      if (!ec_ckpt.empty()) {
        sketch = checkpoint_sketch(ec_ckpt);
      } else {
        ssvec_sketch* raw = nullptr;
        check(ssvec_sketch_load(ec_sketch.c_str(), &raw));
        sketch.reset(raw);
      }
      CountsPtr truth = load_counts(ec_truth);
      ssvec_count_summary summary{};
      check(ssvec_sketch_count_errors(sketch.get(), truth.get(),
                                      ec_mode == "omit" ? SSVEC_COUNTS_OMIT
                                                        : SSVEC_COUNTS_IMPUTE,
                                      ec_csv.empty() ? nullptr : ec_csv.c_str(),
                                      &summary));
      std::printf("words=%" PRIu64 " resident=%" PRIu64 " median_rel_err=%.6g\n",
                  summary.words, summary.resident_words,
                  summary.median_relative_error);
    } else if (*es) {
      EmbeddingsPtr a = load_embeddings(es_a);
      EmbeddingsPtr b = load_embeddings(es_b);
      CountsPtr truth;
      if (!es_truth.empty()) truth = load_counts(es_truth);
      std::vector<ssvec_similarity_summary> out(buckets.size() * (buckets.size() + 1) / 2);
      std::size_t n = 0;
      check(ssvec_similarity_eval(a.get(), b.get(), truth.get(), buckets.data(),
                                  buckets.size(), es_pairs, es_seed,
                                  es_csv.empty() ? nullptr : es_csv.c_str(),
                                  out.data(), out.size(), &n));
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = out[i];
        std::printf("bucket_a=%" PRIu64 "-%" PRIu64 " bucket_b=%" PRIu64 "-%" PRIu64
                    " pairs=%" PRIu64 " defined=%" PRIu64
                    " undefined_fraction=%.6g r=",
                    s.bucket_a.lo, s.bucket_a.hi, s.bucket_b.lo, s.bucket_b.hi,
                    s.pairs_sampled, s.defined_pairs, s.undefined_fraction);
        if (s.pearson_defined) {
          std::printf("%.6g\n", s.pearson_r);
        } else {
          std::printf("undefined\n");
        }
      }
    } else if (*nb) {
      EmbeddingsPtr emb = load_embeddings(nb_model);
      std::vector<ssvec_neighbor> out(nb_top);
      std::size_t n = 0;
      check(ssvec_embeddings_neighbors(emb.get(), nb_word.c_str(), out.data(),
                                       out.size(), &n));
      for (std::size_t i = 0; i < n; ++i) {
        std::printf("%s\t%.6f\n", out[i].word, out[i].cosine);
      }
    } else if (*ex) {
      EmbeddingsPtr emb = load_embeddings(ex_model);
      check(ssvec_embeddings_export(emb.get(), ex_out.c_str()));
    } else if (*ct) {
      CountsPtr counts = load_counts(ct_input);
      check(ssvec_counts_write_tsv(counts.get(), ct_out.c_str()));
    } else if (*sk) {
      SketchPtr sketch;
      if (!sk_ckpt.empty()) {
        sketch = checkpoint_sketch(sk_ckpt);
      } else {
        ssvec_sketch* raw = nullptr;
        check(ssvec_sketch_build(sk_input.c_str(), sk_capacity, &raw));
        sketch.reset(raw);
      }
      check(ssvec_sketch_write(sketch.get(), sk_out.c_str()));
    }
  } catch (const ApiFailure& e) {
    std::fprintf(stderr, "ssvec: %s: %s\n", ssvec_status_string(e.status), e.what());
    return 1;
  }
  return 0;
}
