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

#include "vdr/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "vdr/errors.hpp"

namespace vdr {

namespace {

// Four independent lanes keep the loop vectorizable without reassociation
// flags; the summation order is fixed so results are reproducible.
inline float dot_f32(const float* a, const float* b, std::size_t n) {
  float s0 = 0.f, s1 = 0.f, s2 = 0.f, s3 = 0.f;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

void check_dims(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc) {
  if (query.dim() != doc.dim()) {
    throw DimensionError("query '" + query.id() + "' has h=" + std::to_string(query.dim()) +
                         ", document '" + doc.id() + "' has h=" + std::to_string(doc.dim()));
  }
}

bool is_punct(unsigned char c) { return std::ispunct(c) != 0; }

bool strip_prefix(std::string& s, std::string_view prefix) {
  if (s.size() >= prefix.size() && std::string_view(s).substr(0, prefix.size()) == prefix) {
    s.erase(0, prefix.size());
    return true;
  }
  return false;
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::size_t check_loss_args(std::span<const double> negatives, double tau) {
  if (!(tau > 0.0)) throw ArgumentError("tau must be > 0");
  if (negatives.empty()) throw ArgumentError("contrastive loss needs at least one negative");
  return static_cast<std::size_t>(std::max_element(negatives.begin(), negatives.end()) -
                                  negatives.begin());
}

}  // namespace

void ScoreMode::validate() const {
  if (mask != MaskKind::kAll && kind != ScoreKind::kMaxSim) {
    throw ArgumentError("token mask '" + std::string(to_string(mask)) +
                        "' requires maxsim scoring");
  }
}

std::string_view to_string(ScoreKind kind) {
  return kind == ScoreKind::kPooled ? "pooled" : "maxsim";
}

std::string_view to_string(MaskKind mask) {
  switch (mask) {
    case MaskKind::kAll:
      return "all";
    case MaskKind::kStmOnly:
      return "stm";
    case MaskKind::kQtmOnly:
      return "qtm";
    case MaskKind::kQtmLexicalOnly:
      return "qtm-lex";
    case MaskKind::kQtmNonLexicalOnly:
      return "qtm-nonlex";
  }
  return "all";
}

MaskKind mask_from_string(std::string_view name) {
  if (name == "all") return MaskKind::kAll;
  if (name == "stm") return MaskKind::kStmOnly;
  if (name == "qtm") return MaskKind::kQtmOnly;
  if (name == "qtm-lex") return MaskKind::kQtmLexicalOnly;
  if (name == "qtm-nonlex") return MaskKind::kQtmNonLexicalOnly;
  throw ArgumentError("unknown mask '" + std::string(name) +
                      "' (expected all|stm|qtm|qtm-lex|qtm-nonlex)");
}

ScoreKind score_kind_from_string(std::string_view name) {
  if (name == "pooled") return ScoreKind::kPooled;
  if (name == "maxsim") return ScoreKind::kMaxSim;
  throw ArgumentError("unknown score mode '" + std::string(name) + "' (expected pooled|maxsim)");
}

std::size_t TokenMask::count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), std::uint8_t{1}));
}

std::string normalize_token(std::string_view text) {
  std::string s(text);
  // SentencePiece "▁" (U+2581) and byte-level BPE "Ġ" (U+0120) word markers,
  // WordPiece "##" continuation marker.
  while (strip_prefix(s, "\xE2\x96\x81") || strip_prefix(s, "\xC4\xA0") || strip_prefix(s, "##")) {
  }
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && is_punct(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && is_punct(static_cast<unsigned char>(s[end - 1]))) --end;
  s = s.substr(begin, end - begin);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void add_ocr_tokens(std::string_view text, OcrTokenSet& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      auto token = normalize_token(text.substr(i, j - i));
      if (!token.empty()) out.insert(std::move(token));
    }
    i = j;
  }
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

TokenMask masks_for(const MultiVectorEmbedding& query, const ScoreMode& mode,
                    const OcrTokenSet* doc_ocr_tokens, const MaskOptions& options) {
  mode.validate();
  const std::size_t n = query.rows();
  if (mode.mask == MaskKind::kAll) return TokenMask::all(n);
  if (!query.has_tokens()) {
    throw DataError("query '" + query.id() + "' has no token metadata; mask '" +
                    std::string(to_string(mode.mask)) + "' needs token kinds");
  }
  if (mode.lexical() && doc_ocr_tokens == nullptr) {
    throw ArgumentError("mask '" + std::string(to_string(mode.mask)) +
                        "' requires the document OCR token set");
  }
  TokenMask mask{std::vector<std::uint8_t>(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& token = query.tokens()[i];
    bool on = false;
    switch (mode.mask) {
      case MaskKind::kAll:
        on = true;
        break;
      case MaskKind::kStmOnly:
        on = token.kind == TokenKind::kSpecialPad ||
             (options.stm_includes_prompt && token.kind == TokenKind::kPrompt);
        break;
      case MaskKind::kQtmOnly:
        on = token.kind == TokenKind::kQueryText;
        break;
      case MaskKind::kQtmLexicalOnly:
      case MaskKind::kQtmNonLexicalOnly: {
        if (token.kind != TokenKind::kQueryText) break;
        const auto normalized = normalize_token(token.text);
        bool lexical = !normalized.empty() && doc_ocr_tokens->contains(normalized);
        if (!lexical && !normalized.empty() && options.lexical_match == LexicalMatch::kNear) {
          lexical = std::any_of(doc_ocr_tokens->begin(), doc_ocr_tokens->end(),
                                [&](const std::string& t) {
                                  return edit_distance(normalized, t) <= 1;
                                });
        }
        on = (mode.mask == MaskKind::kQtmLexicalOnly) == lexical;
        break;
      }
    }
    mask.active[i] = on ? 1 : 0;
  }
  return mask;
}

double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

double score_pooled(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                    PoolMode pool_mode) {
  check_dims(query, doc);
  const auto q = pool(query, pool_mode);
  const auto d = pool(doc, pool_mode);
  return std::clamp(dot(q, d), -1.0, 1.0);
}

void token_maxima(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                  std::span<float> out) {
  check_dims(query, doc);
  const std::size_t h = query.dim();
  const std::size_t nq = query.rows();
  const std::size_t nd = doc.rows();
  const float* q = query.values().data();
  const float* d = doc.values().data();
  std::fill(out.begin(), out.begin() + nq, -std::numeric_limits<float>::infinity());
  for (std::size_t j = 0; j < nd; ++j) {
    const float* dj = d + j * h;
    for (std::size_t i = 0; i < nq; ++i) {
      const float s = dot_f32(q + i * h, dj, h);
      if (s > out[i]) out[i] = s;
    }
  }
}

std::vector<float> token_maxima(const MultiVectorEmbedding& query,
                                const MultiVectorEmbedding& doc) {
  std::vector<float> out(query.rows());
  token_maxima(query, doc, out);
  return out;
}

std::vector<float> similarity_matrix(const MultiVectorEmbedding& query,
                                     const MultiVectorEmbedding& doc) {
  check_dims(query, doc);
  const std::size_t h = query.dim();
  const std::size_t nq = query.rows();
  const std::size_t nd = doc.rows();
  std::vector<float> out(nq * nd);
  for (std::size_t i = 0; i < nq; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      out[i * nd + j] = dot_f32(query.values().data() + i * h, doc.values().data() + j * h, h);
    }
  }
  return out;
}

MaxSimScore score_maxsim(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                         const TokenMask& mask) {
  if (mask.size() != query.rows()) {
    throw ArgumentError("mask length " + std::to_string(mask.size()) + " does not match query '" +
                        query.id() + "' with " + std::to_string(query.rows()) + " tokens");
  }
  const auto maxima = token_maxima(query, doc);
  MaxSimScore score;
  std::size_t active = 0;
  for (std::size_t i = 0; i < maxima.size(); ++i) {
    if (!mask.active[i]) continue;
    score.value += maxima[i];
    ++active;
  }
  score.empty_mask = active == 0;
  return score;
}

MaxSimScore score_maxsim(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc) {
  return score_maxsim(query, doc, TokenMask::all(query.rows()));
}

double contrastive_loss(double positive, std::span<const double> negatives, double tau) {
  const auto hardest = check_loss_args(negatives, tau);
  // -log softmax_pos = softplus((s-* - s+) / tau)
  const double x = (negatives[hardest] - positive) / tau;
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

LossGradient contrastive_loss_grad(double positive, std::span<const double> negatives,
                                   double tau) {
  const auto hardest = check_loss_args(negatives, tau);
  const double one_minus_p = stable_sigmoid((negatives[hardest] - positive) / tau);
  return {-one_minus_p / tau, one_minus_p / tau, hardest};
}

}  // namespace vdr
