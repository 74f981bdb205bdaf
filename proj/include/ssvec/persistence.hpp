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

// Model files.
//
// Checkpoints are little-endian binary:
//
//   magic[8]  "SSVECSTM" (stream) or "SSVECBAT" (batch)
//   u32       format version
//   ...       payload sections
//   u32       CRC-32 of every preceding byte
//
// Stream payload: config, sketch (K, observed, entries in replay order),
// reservoir (capacity, seen, values), embeddings (K, D, target, context as
// IEEE-754 binary32), step counters, rng state, stats.
// Batch payload: config, batch options, vocabulary, embeddings.
//
// The text export is the classic "<count> <dim>" header followed by one
// "word v1 ... vD" line per word.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ssvec/batch_trainer.hpp"
#include "ssvec/evaluation.hpp"
#include "ssvec/stream_trainer.hpp"

namespace ssvec {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const StreamModel& model,
                     const std::filesystem::path& path);

/// Throws kIo (missing/unreadable), kFormat (bad magic), kVersion, or
/// kCorrupt (truncation, checksum or invariant violation).
StreamModel load_checkpoint(const std::filesystem::path& path);

void save_batch_model(const BatchModel& model,
                      const std::filesystem::path& path);
BatchModel load_batch_model(const std::filesystem::path& path);

/// Writes words with 9 significant digits per component.
void export_embeddings(const EmbeddingSnapshot& snapshot,
                       const std::filesystem::path& path);
EmbeddingSnapshot import_embeddings(const std::filesystem::path& path);

enum class ModelFileKind { kStreamCheckpoint, kBatchModel, kText };

/// Sniffs the magic bytes; anything else is treated as text embeddings.
ModelFileKind detect_model_file(const std::filesystem::path& path);

/// Loads any supported model file as an embedding snapshot.
EmbeddingSnapshot load_snapshot(const std::filesystem::path& path);

}  // namespace ssvec
