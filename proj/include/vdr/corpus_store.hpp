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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vdr {

enum class TokenKind : std::uint8_t { kQueryText, kSpecialPad, kPrompt };

std::string_view to_string(TokenKind kind);
// Throws DataError on anything other than the three wire names.
TokenKind token_kind_from_string(std::string_view name);

struct TokenMeta {
  std::string text;
  TokenKind kind = TokenKind::kQueryText;

  bool operator==(const TokenMeta&) const = default;
};

struct Grid {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;

  bool operator==(const Grid&) const = default;
};

// One query (rows are tokens) or one document (rows are patches). Row-major
// n x h float storage.
class MultiVectorEmbedding {
 public:
  MultiVectorEmbedding() = default;
  MultiVectorEmbedding(std::string id, std::size_t dim, std::vector<float> values,
                       std::optional<Grid> grid = std::nullopt,
                       std::vector<TokenMeta> tokens = {});

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::span<const float> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const float> values() const { return values_; }
  const std::optional<Grid>& grid() const { return grid_; }
  const std::vector<TokenMeta>& tokens() const { return tokens_; }
  bool has_tokens() const { return !tokens_.empty(); }

  // Replaces token metadata; length must equal rows().
  void set_tokens(std::vector<TokenMeta> tokens);

  // Checks the shape invariants (n >= 1, h >= 1, finite, grid/token sizes).
  void validate() const;

  // L2-normalizes every row in place. Rows whose norm already lies within
  // 1e-6 of one are left untouched so that a write/load cycle is bit-exact.
  // Rows with norm < 1e-12 are rejected with DataError naming id and row.
  void normalize_rows();

  bool operator==(const MultiVectorEmbedding&) const = default;

 private:
  std::string id_;
  std::size_t dim_ = 0;
  std::vector<float> values_;
  std::optional<Grid> grid_;
  std::vector<TokenMeta> tokens_;
};

enum class PoolMode : std::uint8_t {
  kMean,   // normalize(mean of rows)
  kFirst,  // first row, CLS-style
};

// Single-vector summary used by pooled scoring. Output has unit norm.
std::vector<float> pool(const MultiVectorEmbedding& embedding,
                        PoolMode mode = PoolMode::kMean);

// Immutable id-addressed collection. Entries are shared so that prefix
// corpora built for scaling runs do not copy vector payloads.
class Corpus {
 public:
  using EntryPtr = std::shared_ptr<const MultiVectorEmbedding>;

  Corpus() = default;

  // Validates, normalizes and indexes the entries. An empty list yields an
  // empty corpus of the given dim.
  static Corpus build(std::size_t dim, std::vector<MultiVectorEmbedding> entries);
  // Builds from entries that are already validated and normalized.
  static Corpus from_shared(std::size_t dim, std::vector<EntryPtr> entries);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const MultiVectorEmbedding& at(std::size_t ordinal) const { return *entries_.at(ordinal); }
  const MultiVectorEmbedding& operator[](std::size_t ordinal) const { return *entries_[ordinal]; }
  const std::vector<EntryPtr>& shared_entries() const { return entries_; }

  // Mean-pooled row for entry `ordinal`.
  std::span<const float> pooled(std::size_t ordinal) const {
    return {pooled_.data() + ordinal * dim_, dim_};
  }

  std::optional<std::size_t> find(std::string_view id) const;
  const MultiVectorEmbedding& by_id(std::string_view id) const;

  bool operator==(const Corpus& other) const;

 private:
  std::size_t dim_ = 0;
  std::vector<EntryPtr> entries_;
  std::vector<float> pooled_;
  std::unordered_map<std::string, std::size_t> id_index_;
};

// Convenience for callers that hold queries as a Corpus.
std::vector<MultiVectorEmbedding> entries_of(const Corpus& corpus);

}  // namespace vdr
