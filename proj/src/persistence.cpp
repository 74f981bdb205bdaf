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

#include "ssvec/persistence.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>
#include <vector>

#include <boost/crc.hpp>

#include "ssvec/error.hpp"

namespace ssvec {

namespace {

constexpr std::string_view kStreamMagic = "SSVECSTM";
constexpr std::string_view kBatchMagic = "SSVECBAT";

std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
  boost::crc_32_type crc;
  crc.process_bytes(data, size);
  return crc.checksum();
}

class ByteWriter {
 public:
  void raw(std::string_view bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  }
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u64(s.size());
    raw(s);
  }

  void finish_and_write(const std::filesystem::path& path) {
    u32(crc32(buf_.data(), buf_.size()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(buf_.data()),
              static_cast<std::streamsize>(buf_.size()));
    out.close();
    if (!out) fail(ErrorCode::kIo, "write failed: " + path.string());
  }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<std::uint8_t> bytes) : buf_(std::move(bytes)) {}

  std::string_view raw(std::size_t n) {
    need(n);
    std::string_view v(reinterpret_cast<const char*>(buf_.data() + pos_), n);
    pos_ += n;
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return buf_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{buf_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf_[pos_++]} << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    return std::string(raw(checked_count(n, 1)));
  }

  /// Guards element counts read from the file before allocating for them.
  std::size_t checked_count(std::uint64_t n, std::size_t elem_size) const {
    if (n > (buf_.size() - pos_) / elem_size) {
      fail(ErrorCode::kCorrupt, "checkpoint truncated or corrupt");
    }
    return static_cast<std::size_t>(n);
  }

  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (buf_.size() - pos_ < n) {
      fail(ErrorCode::kCorrupt, "checkpoint truncated");
    }
  }

  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIo, "read failed: " + path.string());
  return bytes;
}

// Verifies magic, version and trailing CRC, and returns a reader positioned
// at the start of the payload (trailer excluded).
ByteReader open_checked(const std::filesystem::path& path,
                        std::string_view magic) {
  std::vector<std::uint8_t> bytes = read_file(path);
  if (bytes.size() < magic.size() ||
      std::memcmp(bytes.data(), magic.data(), magic.size()) != 0) {
    fail(ErrorCode::kFormat, "not a " + std::string(magic) + " file: " +
                                 path.string());
  }
  if (bytes.size() < magic.size() + 8) {
    fail(ErrorCode::kCorrupt, "checkpoint truncated");
  }
  std::uint32_t version = 0;
  for (int i = 0; i < 4; ++i) {
    version |= std::uint32_t{bytes[magic.size() + i]} << (8 * i);
  }
  if (version != kCheckpointVersion) {
    fail(ErrorCode::kVersion, "unsupported checkpoint version " +
                                  std::to_string(version));
  }
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) stored |= std::uint32_t{bytes[body + i]} << (8 * i);
  if (crc32(bytes.data(), body) != stored) {
    fail(ErrorCode::kCorrupt, "checkpoint checksum mismatch");
  }
  bytes.resize(body);
  ByteReader reader(std::move(bytes));
  reader.raw(magic.size());
  reader.u32();
  return reader;
}

void write_config(ByteWriter& w, const TrainerConfig& c) {
  w.u64(c.vocab_capacity);
  w.u64(c.reservoir_capacity);
  w.u32(c.negatives);
  w.u32(c.dim);
  w.u32(c.context_radius);
  w.f64(c.subsample_threshold);
  w.u8(c.dynamic_windows ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(c.schedule.kind));
  w.f64(c.schedule.rho0);
  w.f64(c.schedule.rho_min);
  w.f64(c.schedule.horizon);
  w.f64(c.schedule.tau);
  w.f64(c.schedule.kappa);
  w.u64(c.seed);
  w.u64(c.max_sentence_len);
}

TrainerConfig read_config(ByteReader& r) {
  TrainerConfig c;
  c.vocab_capacity = r.u64();
  c.reservoir_capacity = r.u64();
  c.negatives = r.u32();
  c.dim = r.u32();
  c.context_radius = r.u32();
  c.subsample_threshold = r.f64();
  const std::uint8_t dynamic = r.u8();
  const std::uint8_t kind = r.u8();
  if (dynamic > 1 || kind > 1) fail(ErrorCode::kCorrupt, "bad config flags");
  c.dynamic_windows = dynamic == 1;
  c.schedule.kind = static_cast<ScheduleKind>(kind);
  c.schedule.rho0 = r.f64();
  c.schedule.rho_min = r.f64();
  c.schedule.horizon = r.f64();
  c.schedule.tau = r.f64();
  c.schedule.kappa = r.f64();
  c.seed = r.u64();
  c.max_sentence_len = r.u64();
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kCorrupt, std::string("invalid stored config: ") + e.what());
  }
  return c;
}

void write_table(ByteWriter& w, const EmbeddingTable& t) {
  w.u64(t.rows());
  w.u64(t.dim());
  for (float x : t.target_data()) w.f32(x);
  for (float x : t.context_data()) w.f32(x);
}

EmbeddingTable read_table(ByteReader& r, std::uint64_t rows,
                          std::uint64_t dim) {
  if (r.u64() != rows || r.u64() != dim) {
    fail(ErrorCode::kCorrupt, "embedding shape disagrees with config");
  }
  r.checked_count(rows * dim * 2, 4);
  EmbeddingTable t(rows, dim);
  for (auto& x : t.target_data()) x = r.f32();
  for (auto& x : t.context_data()) x = r.f32();
  if (!t.all_finite()) fail(ErrorCode::kCorrupt, "non-finite embedding value");
  return t;
}

}  // namespace

void save_checkpoint(const StreamModel& model,
                     const std::filesystem::path& path) {
  ByteWriter w;
  w.raw(kStreamMagic);
  w.u32(kCheckpointVersion);
  write_config(w, model.config);

  const auto entries = model.sketch.entries();
  w.u64(model.sketch.capacity());
  w.u64(model.sketch.observed());
  w.u64(entries.size());
  for (const auto& e : entries) {
    w.u32(e.slot);
    w.u64(e.count);
    w.str(e.word);
  }

  w.u64(model.negatives.capacity());
  w.u64(model.negatives.seen());
  w.u64(model.negatives.size());
  for (Slot s : model.negatives.values()) w.u32(s);

  write_table(w, model.table);

  w.u64(model.learning.slots());
  for (std::uint64_t t : model.learning.all_steps()) w.u64(t);

  w.str(model.rng.save_state());

  const StreamStats& s = model.stats;
  for (std::uint64_t v : {s.sentences, s.tokens, s.retained_tokens,
                          s.ejections, s.contexts_trained,
                          s.contexts_skipped}) {
    w.u64(v);
  }
  w.finish_and_write(path);
}

StreamModel load_checkpoint(const std::filesystem::path& path) {
  ByteReader r = open_checked(path, kStreamMagic);
  TrainerConfig config = read_config(r);
  const std::uint64_t k = config.vocab_capacity;

  if (r.u64() != k) fail(ErrorCode::kCorrupt, "sketch size disagrees");
  const std::uint64_t observed = r.u64();
  const std::size_t n_entries = r.checked_count(r.u64(), 20);
  std::vector<SketchEntry> entries;
  entries.reserve(n_entries);
  for (std::size_t i = 0; i < n_entries; ++i) {
    SketchEntry e;
    e.slot = r.u32();
    e.count = r.u64();
    e.word = r.str();
    entries.push_back(std::move(e));
  }
  SpaceSavingSketch sketch = SpaceSavingSketch::restore(k, observed, entries);

  const std::uint64_t res_capacity = r.u64();
  const std::uint64_t res_seen = r.u64();
  if (res_capacity != config.reservoir_capacity) {
    fail(ErrorCode::kCorrupt, "reservoir size disagrees");
  }
  const std::size_t n_values = r.checked_count(r.u64(), 4);
  std::vector<Slot> values(n_values);
  for (auto& v : values) {
    v = r.u32();
    if (v >= sketch.size()) fail(ErrorCode::kCorrupt, "reservoir slot out of range");
  }
  Reservoir reservoir =
      Reservoir::restore(res_capacity, res_seen, std::move(values));

  EmbeddingTable table = read_table(r, k, config.dim);

  if (r.u64() != k) fail(ErrorCode::kCorrupt, "learning state size disagrees");
  r.checked_count(k, 8);
  std::vector<std::uint64_t> steps(k);
  for (auto& t : steps) t = r.u64();
  SlotLearningState learning =
      SlotLearningState::restore(config.schedule, std::move(steps));

  Rng rng;
  rng.load_state(r.str());

  StreamStats stats;
  for (std::uint64_t* v : {&stats.sentences, &stats.tokens,
                           &stats.retained_tokens, &stats.ejections,
                           &stats.contexts_trained, &stats.contexts_skipped}) {
    *v = r.u64();
  }
  if (r.remaining() != 0) fail(ErrorCode::kCorrupt, "trailing checkpoint bytes");

  return StreamModel(std::move(config), std::move(sketch),
                     std::move(reservoir), std::move(table),
                     std::move(learning), std::move(rng), stats);
}

void save_batch_model(const BatchModel& model,
                      const std::filesystem::path& path) {
  ByteWriter w;
  w.raw(kBatchMagic);
  w.u32(kCheckpointVersion);
  write_config(w, model.config);
  w.u32(model.options.epochs);
  w.u64(model.options.min_count);
  w.u64(model.options.table_size);
  w.u64(model.options.max_vocab);
  w.u64(model.vocab.size());
  for (const auto& [word, count] : model.vocab.words) {
    w.str(word);
    w.u64(count);
  }
  write_table(w, model.table);
  w.finish_and_write(path);
}

BatchModel load_batch_model(const std::filesystem::path& path) {
  ByteReader r = open_checked(path, kBatchMagic);
  BatchModel model;
  model.config = read_config(r);
  model.options.epochs = r.u32();
  model.options.min_count = r.u64();
  model.options.table_size = r.u64();
  model.options.max_vocab = r.u64();
  const std::size_t n = r.checked_count(r.u64(), 16);
  if (n == 0) fail(ErrorCode::kCorrupt, "empty batch vocabulary");
  RankedCounts words;
  words.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string word = r.str();
    const std::uint64_t count = r.u64();
    if (word.empty()) fail(ErrorCode::kCorrupt, "empty vocabulary word");
    words.emplace_back(std::move(word), count);
  }
  model.vocab = BatchVocab::from_ranked(std::move(words));
  if (model.vocab.index.size() != n) {
    fail(ErrorCode::kCorrupt, "duplicate vocabulary word");
  }
  model.table = read_table(r, n, model.config.dim);
  if (r.remaining() != 0) fail(ErrorCode::kCorrupt, "trailing model bytes");
  return model;
}

void export_embeddings(const EmbeddingSnapshot& snapshot,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << snapshot.size() << ' ' << snapshot.dim() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    out << snapshot.word(i);
    for (float x : snapshot.vector(i)) {
      std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(x));
      out << buf;
    }
    out << '\n';
  }
  out.close();
  if (!out) fail(ErrorCode::kIo, "write failed: " + path.string());
}

EmbeddingSnapshot import_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  std::size_t count = 0, dim = 0;
  if (!std::getline(in, line)) fail(ErrorCode::kFormat, "empty embedding file");
  {
    std::istringstream header(line);
    if (!(header >> count >> dim) || dim == 0) {
      fail(ErrorCode::kFormat, "bad embedding header in " + path.string());
    }
  }
  EmbeddingSnapshot snap(dim);
  std::vector<float> vec(dim);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) {
      fail(ErrorCode::kFormat, "embedding file has fewer rows than its header");
    }
    std::istringstream row(line);
    std::string word;
    row >> word;
    for (auto& x : vec) {
      if (!(row >> x)) fail(ErrorCode::kFormat, "short embedding row: " + word);
    }
    std::string extra;
    if (row >> extra) fail(ErrorCode::kFormat, "long embedding row: " + word);
    snap.add(std::move(word), vec);
  }
  return snap;
}

ModelFileKind detect_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  char magic[8] = {};
  in.read(magic, sizeof magic);
  const std::string_view head(magic, static_cast<std::size_t>(in.gcount()));
  if (head == kStreamMagic) return ModelFileKind::kStreamCheckpoint;
  if (head == kBatchMagic) return ModelFileKind::kBatchModel;
  return ModelFileKind::kText;
}

EmbeddingSnapshot load_snapshot(const std::filesystem::path& path) {
  switch (detect_model_file(path)) {
    case ModelFileKind::kStreamCheckpoint:
      return EmbeddingSnapshot::of(load_checkpoint(path));
    case ModelFileKind::kBatchModel:
      return EmbeddingSnapshot::of(load_batch_model(path));
    case ModelFileKind::kText:
      break;
  }
  return import_embeddings(path);
}

}  // namespace ssvec
