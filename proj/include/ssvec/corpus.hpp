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

// Corpus ingestion: tokenized sentence streams and exact word counts.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ssvec {

/// Default pseudo-sentence length for newline-free corpora such as text8.
inline constexpr std::size_t kDefaultMaxSentenceLen = 1000;

struct Sentence {
  std::vector<std::string> tokens;
};

/// Exact per-type counts. `total` is always the sum of the entries.
struct CountTable {
  std::unordered_map<std::string, std::uint64_t> entries;
  std::uint64_t total = 0;

  void add(const std::string& word, std::uint64_t n = 1) {
    entries[word] += n;
    total += n;
  }
};

using RankedCounts = std::vector<std::pair<std::string, std::uint64_t>>;

/// Pulls sentences from a byte stream one at a time.
///
/// Tokens are lowercased (ASCII only) and split on ASCII whitespace. A
/// newline ends a sentence, long sentences are cut into chunks of at most
/// `max_sentence_len` tokens, and empty sentences are never produced.
/// Malformed UTF-8 raises ErrorCode::kEncoding; a stream failure raises
/// ErrorCode::kIo. The stream must outlive the reader.
class SentenceReader {
 public:
  SentenceReader(std::istream& in, std::size_t max_sentence_len);

  /// Fills `out` with the next sentence. Returns false at end of input.
  bool next(Sentence& out);

  std::uint64_t bytes_read() const { return bytes_read_; }

 private:
  bool fill();
  void finish_token(Sentence& out);

  std::istream& in_;
  std::size_t max_len_;
  std::vector<char> buffer_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  std::string token_;
  std::uint64_t bytes_read_ = 0;
  bool eof_ = false;
};

/// Reads every sentence of `in` into memory.
std::vector<Sentence> read_sentences(std::istream& in,
                                     std::size_t max_sentence_len);

CountTable exact_counts(std::istream& in);

/// Descending by count, ties broken by ascending word.
RankedCounts rank_by_frequency(const CountTable& table);

/// Validates a byte string as UTF-8 (rejects overlongs and surrogates).
bool is_valid_utf8(std::string_view bytes);

/// A re-openable corpus. Batch training reads its input once per pass, so
/// it takes a source rather than a stream.
class CorpusSource {
 public:
  virtual ~CorpusSource() = default;
  virtual std::unique_ptr<std::istream> open() const = 0;
};

class FileSource : public CorpusSource {
 public:
  explicit FileSource(std::filesystem::path path) : path_(std::move(path)) {}
  std::unique_ptr<std::istream> open() const override;

 private:
  std::filesystem::path path_;
};

class MemorySource : public CorpusSource {
 public:
  explicit MemorySource(std::string text) : text_(std::move(text)) {}
  std::unique_ptr<std::istream> open() const override;

 private:
  std::string text_;
};

/// A file opened for reading, or standard input when the path is "-".
class InputFile {
 public:
  explicit InputFile(const std::string& path);
  std::istream& stream() { return owned_ ? *owned_ : *borrowed_; }

 private:
  std::unique_ptr<std::istream> owned_;
  std::istream* borrowed_ = nullptr;
};

/// Writes `rank_by_frequency(table)` as word<TAB>count lines.
void write_counts_tsv(const CountTable& table, std::ostream& out);

}  // namespace ssvec
