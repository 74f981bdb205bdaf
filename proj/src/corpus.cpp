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

#include "ssvec/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ssvec/error.hpp"

namespace ssvec {

namespace {

constexpr std::size_t kReadBlock = 1 << 16;

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      ++i;
      continue;
    }
    std::size_t len;
    std::uint32_t cp;
    if (b0 >= 0xC2 && b0 <= 0xDF) {
      len = 2;
      cp = b0 & 0x1F;
    } else if (b0 >= 0xE0 && b0 <= 0xEF) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xF0 && b0 <= 0xF4) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(bytes[i + k]);
      if ((b & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if ((len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

SentenceReader::SentenceReader(std::istream& in, std::size_t max_sentence_len)
    : in_(in), max_len_(max_sentence_len), buffer_(kReadBlock) {
  require(max_sentence_len >= 1, "max_sentence_len must be positive");
}

bool SentenceReader::fill() {
  if (eof_) return false;
  in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (in_.bad()) fail(ErrorCode::kIo, "read error on corpus input");
  if (got < buffer_.size()) eof_ = true;
  pos_ = 0;
  end_ = got;
  bytes_read_ += got;
  return got > 0;
}

void SentenceReader::finish_token(Sentence& out) {
  if (token_.empty()) return;
  if (!is_valid_utf8(token_)) {
    fail(ErrorCode::kEncoding,
         "invalid UTF-8 near byte offset " + std::to_string(bytes_read_));
  }
  out.tokens.push_back(std::move(token_));
  token_.clear();
}

bool SentenceReader::next(Sentence& out) {
  out.tokens.clear();
  for (;;) {
    if (pos_ == end_ && !fill()) {
      finish_token(out);
      return !out.tokens.empty();
    }
    const char c = buffer_[pos_++];
    if (c == '\n') {
      finish_token(out);
      if (!out.tokens.empty()) return true;
    } else if (is_ascii_space(c)) {
      finish_token(out);
      if (out.tokens.size() == max_len_) return true;
    } else {
      token_.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c);
    }
  }
}

std::vector<Sentence> read_sentences(std::istream& in,
                                     std::size_t max_sentence_len) {
  SentenceReader reader(in, max_sentence_len);
  std::vector<Sentence> out;
  Sentence s;
  while (reader.next(s)) out.push_back(std::move(s));
  return out;
}

CountTable exact_counts(std::istream& in) {
  SentenceReader reader(in, kDefaultMaxSentenceLen);
  CountTable table;
  Sentence s;
  while (reader.next(s)) {
    for (const auto& w : s.tokens) table.add(w);
  }
  return table;
}

RankedCounts rank_by_frequency(const CountTable& table) {
  RankedCounts ranked(table.entries.begin(), table.entries.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

std::unique_ptr<std::istream> FileSource::open() const {
  auto in = std::make_unique<std::ifstream>(path_, std::ios::binary);
  if (!*in) fail(ErrorCode::kIo, "cannot open " + path_.string());
  return in;
}

std::unique_ptr<std::istream> MemorySource::open() const {
  return std::make_unique<std::istringstream>(text_);
}

InputFile::InputFile(const std::string& path) {
  if (path == "-") {
    borrowed_ = &std::cin;
    return;
  }
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) fail(ErrorCode::kIo, "cannot open " + path);
  owned_ = std::move(in);
}

void write_counts_tsv(const CountTable& table, std::ostream& out) {
  for (const auto& [word, count] : rank_by_frequency(table)) {
    out << word << '\t' << count << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "write failed");
}

}  // namespace ssvec
