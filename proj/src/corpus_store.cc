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

#include "vdr/corpus_store.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "vdr/errors.hpp"

namespace vdr {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kQueryText:
      return "query_text";
    case TokenKind::kSpecialPad:
      return "special_pad";
    case TokenKind::kPrompt:
      return "prompt";
  }
  return "query_text";
}

TokenKind token_kind_from_string(std::string_view name) {
  if (name == "query_text") return TokenKind::kQueryText;
  if (name == "special_pad") return TokenKind::kSpecialPad;
  if (name == "prompt") return TokenKind::kPrompt;
  throw DataError("unknown token kind '" + std::string(name) + "'");
}

MultiVectorEmbedding::MultiVectorEmbedding(std::string id, std::size_t dim,
                                           std::vector<float> values,
                                           std::optional<Grid> grid,
                                           std::vector<TokenMeta> tokens)
    : id_(std::move(id)),
      dim_(dim),
      values_(std::move(values)),
      grid_(grid),
      tokens_(std::move(tokens)) {}

void MultiVectorEmbedding::set_tokens(std::vector<TokenMeta> tokens) {
  if (!tokens.empty() && tokens.size() != rows()) {
    std::ostringstream msg;
    msg << "record '" << id_ << "': " << tokens.size() << " token entries for " << rows()
        << " rows";
    throw DataError(msg.str());
  }
  tokens_ = std::move(tokens);
}

void MultiVectorEmbedding::validate() const {
  if (dim_ == 0) throw DimensionError("record '" + id_ + "': dimension is 0");
  if (values_.empty() || values_.size() % dim_ != 0) {
    std::ostringstream msg;
    msg << "record '" << id_ << "': " << values_.size() << " values is not a positive multiple of h="
        << dim_;
    throw DataError(msg.str());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream msg;
      msg << "record '" << id_ << "': non-finite value at row " << i / dim_;
      throw DataError(msg.str());
    }
  }
  if (grid_ && static_cast<std::size_t>(grid_->rows) * grid_->cols != rows()) {
    std::ostringstream msg;
    msg << "record '" << id_ << "': grid " << grid_->rows << "x" << grid_->cols << " does not match "
        << rows() << " rows";
    throw DataError(msg.str());
  }
  if (!tokens_.empty() && tokens_.size() != rows()) {
    std::ostringstream msg;
    msg << "record '" << id_ << "': " << tokens_.size() << " token entries for " << rows()
        << " rows";
    throw DataError(msg.str());
  }
  for (const auto& token : tokens_) {
    if (token.kind == TokenKind::kSpecialPad && token.text.empty()) {
      throw DataError("record '" + id_ + "': special_pad token with empty text");
    }
  }
}

void MultiVectorEmbedding::normalize_rows() {
  const std::size_t n = rows();
  for (std::size_t r = 0; r < n; ++r) {
    float* row = values_.data() + r * dim_;
    double sq = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) sq += static_cast<double>(row[c]) * row[c];
    const double norm = std::sqrt(sq);
    if (!(norm >= 1e-12)) {
      std::ostringstream msg;
      msg << "record '" << id_ << "': row " << r << " has zero norm";
      throw DataError(msg.str());
    }
    if (std::abs(norm - 1.0) <= 1e-6) continue;
    for (std::size_t c = 0; c < dim_; ++c) row[c] = static_cast<float>(row[c] / norm);
  }
}

std::vector<float> pool(const MultiVectorEmbedding& embedding, PoolMode mode) {
  const std::size_t dim = embedding.dim();
  std::vector<double> acc(dim, 0.0);
  if (mode == PoolMode::kFirst) {
    auto first = embedding.row(0);
    for (std::size_t c = 0; c < dim; ++c) acc[c] = first[c];
  } else {
    for (std::size_t r = 0; r < embedding.rows(); ++r) {
      auto row = embedding.row(r);
      for (std::size_t c = 0; c < dim; ++c) acc[c] += row[c];
    }
  }
  double sq = 0.0;
  for (double v : acc) sq += v * v;
  const double norm = std::sqrt(sq);
  std::vector<float> out(dim, 0.0f);
  // Rows that cancel exactly (e.g. a vector and its antipode) have no
  // direction; the zero vector scores 0 against everything.
  if (norm < 1e-12) return out;
  for (std::size_t c = 0; c < dim; ++c) out[c] = static_cast<float>(acc[c] / norm);
  return out;
}

Corpus Corpus::build(std::size_t dim, std::vector<MultiVectorEmbedding> entries) {
  std::vector<EntryPtr> shared;
  shared.reserve(entries.size());
  for (auto& entry : entries) {
    entry.validate();
    if (entry.dim() != dim) {
      std::ostringstream msg;
      msg << "record '" << entry.id() << "' has h=" << entry.dim() << ", corpus has h=" << dim;
      if (!shared.empty()) msg << " (first record '" << shared.front()->id() << "')";
      throw DimensionError(msg.str());
    }
    entry.normalize_rows();
    shared.push_back(std::make_shared<const MultiVectorEmbedding>(std::move(entry)));
  }
  return from_shared(dim, std::move(shared));
}

Corpus Corpus::from_shared(std::size_t dim, std::vector<EntryPtr> entries) {
  Corpus corpus;
  corpus.dim_ = dim;
  corpus.entries_ = std::move(entries);
  corpus.pooled_.reserve(corpus.entries_.size() * dim);
  corpus.id_index_.reserve(corpus.entries_.size());
  for (std::size_t i = 0; i < corpus.entries_.size(); ++i) {
    const auto& entry = *corpus.entries_[i];
    if (entry.dim() != dim) {
      throw DimensionError("record '" + entry.id() + "' dimension differs from corpus");
    }
    if (!corpus.id_index_.emplace(entry.id(), i).second) {
      throw DataError("duplicate record id '" + entry.id() + "'");
    }
    auto pooled = pool(entry);
    corpus.pooled_.insert(corpus.pooled_.end(), pooled.begin(), pooled.end());
  }
  return corpus;
}

std::optional<std::size_t> Corpus::find(std::string_view id) const {
  auto it = id_index_.find(std::string(id));
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

const MultiVectorEmbedding& Corpus::by_id(std::string_view id) const {
  auto ordinal = find(id);
  if (!ordinal) throw DataError("no record with id '" + std::string(id) + "'");
  return *entries_[*ordinal];
}

bool Corpus::operator==(const Corpus& other) const {
  if (dim_ != other.dim_ || entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(*entries_[i] == *other.entries_[i])) return false;
  }
  return true;
}

std::vector<MultiVectorEmbedding> entries_of(const Corpus& corpus) {
  std::vector<MultiVectorEmbedding> out;
  out.reserve(corpus.size());
  for (const auto& entry : corpus.shared_entries()) out.push_back(*entry);
  return out;
}

}  // namespace vdr
