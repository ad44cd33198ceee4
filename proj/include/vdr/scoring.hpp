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
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vdr/corpus_store.hpp"

namespace vdr {

enum class ScoreKind : std::uint8_t { kPooled, kMaxSim };

enum class MaskKind : std::uint8_t {
  kAll,
  kStmOnly,            // special-token matching: pad (+ prompt) rows
  kQtmOnly,            // query-token matching: query_text rows
  kQtmLexicalOnly,     // query_text rows whose text appears in the page OCR
  kQtmNonLexicalOnly,  // the remaining query_text rows
};

struct ScoreMode {
  ScoreKind kind = ScoreKind::kMaxSim;
  MaskKind mask = MaskKind::kAll;

  // Throws ArgumentError when a token mask is combined with pooled scoring.
  void validate() const;
  bool lexical() const {
    return mask == MaskKind::kQtmLexicalOnly || mask == MaskKind::kQtmNonLexicalOnly;
  }
  bool operator==(const ScoreMode&) const = default;
};

std::string_view to_string(ScoreKind kind);
std::string_view to_string(MaskKind mask);
// Accepts the CLI spellings: all, stm, qtm, qtm-lex, qtm-nonlex.
MaskKind mask_from_string(std::string_view name);
ScoreKind score_kind_from_string(std::string_view name);

enum class LexicalMatch : std::uint8_t {
  kExact,  // normalized string equality
  kNear,   // also accept edit distance <= 1
};

struct MaskOptions {
  bool stm_includes_prompt = true;
  LexicalMatch lexical_match = LexicalMatch::kExact;
};

struct TokenMask {
  std::vector<std::uint8_t> active;

  static TokenMask all(std::size_t n) { return {std::vector<std::uint8_t>(n, 1)}; }
  std::size_t size() const { return active.size(); }
  std::size_t count() const;
};

using OcrTokenSet = std::unordered_set<std::string>;

// Lowercase, drop subword-continuation markers ("##", U+2581, U+0120) and
// leading/trailing ASCII punctuation.
std::string normalize_token(std::string_view text);

// Whitespace-splits free text and inserts the normalized, non-empty tokens.
void add_ocr_tokens(std::string_view text, OcrTokenSet& out);

std::size_t edit_distance(std::string_view a, std::string_view b);

// Builds the per-token activation for `mode`. `doc_ocr_tokens` may be null
// unless the mode is lexical.
TokenMask masks_for(const MultiVectorEmbedding& query, const ScoreMode& mode,
                    const OcrTokenSet* doc_ocr_tokens, const MaskOptions& options = {});

double score_pooled(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                    PoolMode pool_mode = PoolMode::kMean);
// Cosine of two already-pooled unit vectors.
double dot(std::span<const float> a, std::span<const float> b);

struct MaxSimScore {
  double value = 0.0;
  bool empty_mask = false;  // no active tokens; value is 0
};

// Per-token max_j <q_i, d_j>, computed in float.
std::vector<float> token_maxima(const MultiVectorEmbedding& query,
                                const MultiVectorEmbedding& doc);
// Same, into caller storage of size query.rows().
void token_maxima(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                  std::span<float> out);

// Full |Q| x |D| similarity matrix, row-major, same kernel as token_maxima.
std::vector<float> similarity_matrix(const MultiVectorEmbedding& query,
                                     const MultiVectorEmbedding& doc);

// Sum over active tokens of token_maxima, reduced in double.
MaxSimScore score_maxsim(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                         const TokenMask& mask);
MaxSimScore score_maxsim(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc);

// Pairwise contrastive loss against the hardest in-batch negative:
//   -log( e^{s+/tau} / (e^{s+/tau} + e^{s-*/tau}) ),  s-* = max(negatives)
double contrastive_loss(double positive, std::span<const double> negatives, double tau = 1.0);

struct LossGradient {
  double d_positive = 0.0;
  double d_hardest_negative = 0.0;
  std::size_t hardest_index = 0;  // every other negative has zero gradient
};

LossGradient contrastive_loss_grad(double positive, std::span<const double> negatives,
                                   double tau = 1.0);

}  // namespace vdr
