// Copyright 2026 The VDR Engine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vdr/corpus_store.hpp"

namespace vdr {

// Embedding file layout (little-endian):
//   "VDRE" | u16 version=1 | u8 dtype (0=f32, 1=f16) | u32 dim | u64 count
//   per record: u16 id_len | id bytes | u32 n | u32 grid_rows | u32 grid_cols
//               | n*dim values, row-major
inline constexpr char kMagic[4] = {'V', 'D', 'R', 'E'};
inline constexpr std::uint16_t kFormatVersion = 1;

enum class DType : std::uint8_t { kFloat32 = 0, kFloat16 = 1 };

// Reads an embedding file. When `token_sidecar` is given, its records are
// attached by id. Half-precision payloads are widened to float.
Corpus load_corpus(const std::filesystem::path& path,
                   const std::optional<std::filesystem::path>& token_sidecar = std::nullopt);

// Writes float32 payloads. Token metadata is not part of the binary format;
// use write_token_sidecar for it.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Low-level variant used for tests and the float16 path.
void write_embeddings(const std::vector<MultiVectorEmbedding>& entries, std::size_t dim,
                      const std::filesystem::path& path, DType dtype = DType::kFloat32);

using TokenTable = std::unordered_map<std::string, std::vector<TokenMeta>>;

// One JSON object per line: {"id": ..., "tokens": [{"text": ..., "kind": ...}]}.
TokenTable read_token_sidecar(const std::filesystem::path& path);
void write_token_sidecar(const Corpus& corpus, const std::filesystem::path& path);

float half_to_float(std::uint16_t bits);
std::uint16_t float_to_half(float value);

}  // namespace vdr
