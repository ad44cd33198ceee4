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

#include "vdr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "vdr/corpus_io.hpp"

namespace vdr {

namespace {

constexpr std::uint64_t kStreamShared = 1ULL << 40;
constexpr std::uint64_t kStreamQuery = 2ULL << 40;
constexpr std::uint64_t kStreamDoc = 3ULL << 40;
constexpr std::uint64_t kStreamPage = 4ULL << 40;
constexpr std::uint64_t kStreamDistractor = 5ULL << 40;

constexpr const char* kPadText = "<|endoftext|>";
constexpr std::uint8_t kInkLevel = 20;
constexpr std::uint8_t kFigureLevel = 128;

using Vec = std::vector<float>;

Vec random_unit(CounterRng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      sq += x * x;
    }
  } while (sq < 1e-12);
  const double norm = std::sqrt(sq);
  Vec out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = static_cast<float>(v[i] / norm);
  return out;
}

Vec normalized(const std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i] / norm);
  return out;
}

std::vector<std::size_t> permutation(CounterRng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.uniform_int(0, i - 1)]);
  return p;
}

std::string numbered(const char* prefix, std::size_t width, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%0*zu", prefix, static_cast<int>(width), i);
  return buf;
}

std::string word(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "w%04zu", index);
  return buf;
}

struct SharedVectors {
  Vec pad;
  std::vector<Vec> prompts;
};

SharedVectors shared_vectors(const SynthSpec& spec) {
  CounterRng rng(spec.seed, kStreamShared);
  SharedVectors shared;
  shared.pad = random_unit(rng, spec.dim);
  for (std::size_t k = 0; k < spec.prompt_tokens; ++k) {
    shared.prompts.push_back(random_unit(rng, spec.dim));
  }
  return shared;
}

struct QueryDraft {
  std::vector<Vec> text;
  std::vector<std::string> words;
};

// Places the shared special patches at the first free positions; returns the
// number of slots consumed.
std::size_t place_specials(const SynthSpec& spec, const SharedVectors& shared,
                           const std::vector<std::size_t>& positions, std::vector<Vec>& slots) {
  if (!spec.special_patches) return 0;
  std::size_t used = 0;
  slots[positions[used++]] = shared.pad;
  for (const auto& prompt : shared.prompts) slots[positions[used++]] = prompt;
  return used;
}

MultiVectorEmbedding to_embedding(std::string id, const SynthSpec& spec,
                                  const std::vector<Vec>& slots) {
  std::vector<float> values;
  values.reserve(slots.size() * spec.dim);
  for (const auto& v : slots) values.insert(values.end(), v.begin(), v.end());
  return {std::move(id), spec.dim, std::move(values), Grid{spec.grid_rows, spec.grid_cols}};
}

struct Page {
  OcrPage ocr;
  GrayImage image;
};

Page render_page(const SynthSpec& spec, const std::string& doc_id,
                 std::vector<std::string> words, std::size_t index) {
  CounterRng rng(spec.seed, kStreamPage | index);
  for (std::size_t r = 0; r < spec.random_ocr_words; ++r) {
    words.push_back(word(rng.uniform_int(0, spec.vocabulary - 1)));
  }
  const auto order = permutation(rng, words.size());

  const std::size_t width = spec.page_width;
  const std::size_t height = spec.page_height;
  Page page;
  page.ocr.doc_id = doc_id;
  page.ocr.width = width;
  page.ocr.height = height;
  page.image.width = width;
  page.image.height = height;
  page.image.pixels.assign(width * height, 255);

  constexpr std::size_t kMargin = 2;
  constexpr std::size_t kLineHeight = 6;
  constexpr std::size_t kGap = 2;
  constexpr std::size_t kCharWidth = 2;
  std::size_t x = kMargin;
  std::size_t y = kMargin;
  std::size_t text_background = 0;
  // Text never takes more than half the page so the figure below has room.
  const std::size_t text_limit = height / 2;
  for (std::size_t o : order) {
    const auto& w = words[o];
    const std::size_t box_w = kCharWidth * w.size();
    if (x + box_w + kMargin > width) {
      x = kMargin;
      y += kLineHeight + kGap;
    }
    if (y + kLineHeight > text_limit) break;
    page.ocr.boxes.push_back({static_cast<double>(x), static_cast<double>(y),
                              static_cast<double>(box_w), static_cast<double>(kLineHeight), w});
    for (std::size_t py = y; py < y + kLineHeight; ++py) {
      for (std::size_t px = x; px < x + box_w; ++px) {
        // every third column of a glyph box stays paper-white
        if ((px - x) % 3 == 2) {
          ++text_background;
        } else {
          page.image.pixels[py * width + px] = kInkLevel;
        }
      }
    }
    x += box_w + kGap;
  }

  // Figure block under the text. It must hold at least as many non-background
  // pixels as there are background pixels inside text boxes, otherwise the
  // non-text coverage would go negative.
  const std::size_t fig_top = std::min(y + kLineHeight + kGap, text_limit) + kGap;
  const std::size_t fig_bottom = height - kMargin;
  const std::size_t fig_height = fig_bottom - fig_top;
  const std::size_t max_w = width - 2 * kMargin;
  const std::size_t min_w = std::min(max_w, text_background / fig_height + 1);
  const std::size_t fig_w = rng.uniform_int(min_w, max_w);
  const std::size_t fig_h = rng.uniform_int((min_w * fig_height + fig_w - 1) / fig_w, fig_height);
  for (std::size_t py = fig_top; py < fig_top + fig_h; ++py) {
    for (std::size_t px = kMargin; px < kMargin + fig_w; ++px) {
      page.image.pixels[py * width + px] = kFigureLevel;
    }
  }
  return page;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(seed + stream * 0xD1B54A32D192ED03ULL) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(base_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::size_t CounterRng::uniform_int(std::size_t lo, std::size_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return lo + next_u64();
  // rejection sampling to avoid modulo bias
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return lo + static_cast<std::size_t>(x % span);
}

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SynthSpec::validate() const {
  if (dim < 8) throw ArgumentError("synthetic dim must be >= 8 to embed the planted structure");
  if (num_queries > num_docs) throw ArgumentError("num_queries must not exceed num_docs");
  if (min_text_tokens < 1 || min_text_tokens > max_text_tokens) {
    throw ArgumentError("text token range must satisfy 1 <= min <= max");
  }
  if (!(planted_relevance >= 0.0 && planted_relevance <= 1.0)) {
    throw ArgumentError("planted_relevance must be in [0, 1]");
  }
  if (!(noise >= 0.0)) throw ArgumentError("noise must be >= 0");
  const std::size_t specials = special_patches ? 1 + prompt_tokens : 0;
  if (patches_per_doc() < max_text_tokens + specials || patches_per_doc() == 0) {
    throw ArgumentError("grid has " + std::to_string(patches_per_doc()) +
                        " patches; need at least " + std::to_string(max_text_tokens + specials));
  }
  if (vocabulary < 1) throw ArgumentError("vocabulary must be nonempty");
  if (page_width < 16 || page_height < 16) throw ArgumentError("pages must be at least 16x16");
}

SynthSpec adversarial_spec(std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  spec.num_docs = 50;
  spec.num_queries = 20;
  spec.grid_rows = 6;
  spec.grid_cols = 6;
  spec.adversarial = true;
  return spec;
}

SynthData generate(const SynthSpec& spec) {
  spec.validate();
  const auto shared = shared_vectors(spec);

  SynthData data;
  std::vector<QueryDraft> drafts(spec.num_queries);
  std::vector<MultiVectorEmbedding> queries;
  for (std::size_t q = 0; q < spec.num_queries; ++q) {
    CounterRng rng(spec.seed, kStreamQuery | q);
    auto& draft = drafts[q];
    const std::size_t m = rng.uniform_int(spec.min_text_tokens, spec.max_text_tokens);
    for (std::size_t t = 0; t < m; ++t) {
      draft.text.push_back(random_unit(rng, spec.dim));
      draft.words.push_back(word(rng.uniform_int(0, spec.vocabulary - 1)));
    }
    std::vector<float> values;
    std::vector<TokenMeta> tokens;
    for (std::size_t k = 0; k < spec.prompt_tokens; ++k) {
      values.insert(values.end(), shared.prompts[k].begin(), shared.prompts[k].end());
      tokens.push_back({k == 0 ? "Query" : (k == 1 ? ":" : "<prompt>"), TokenKind::kPrompt});
    }
    for (std::size_t t = 0; t < m; ++t) {
      values.insert(values.end(), draft.text[t].begin(), draft.text[t].end());
      tokens.push_back({"\xE2\x96\x81" + draft.words[t], TokenKind::kQueryText});
    }
    for (std::size_t k = 0; k < spec.pad_tokens; ++k) {
      values.insert(values.end(), shared.pad.begin(), shared.pad.end());
      tokens.push_back({kPadText, TokenKind::kSpecialPad});
    }
    queries.emplace_back(numbered("q", 5, q), spec.dim, std::move(values), std::nullopt,
                         std::move(tokens));
    data.qrels[queries.back().id()][numbered("doc", 6, q)] = 1;
  }

  std::vector<MultiVectorEmbedding> docs;
  const std::size_t n = spec.patches_per_doc();
  for (std::size_t d = 0; d < spec.num_docs; ++d) {
    CounterRng rng(spec.seed, kStreamDoc | d);
    std::vector<Vec> slots(n);
    const auto positions = permutation(rng, n);
    std::size_t used = place_specials(spec, shared, positions, slots);
    std::vector<std::string> planted_words;
    const bool relevant = d < spec.num_queries;
    if (relevant) {
      const auto& draft = drafts[d];
      const auto m = draft.text.size();
      const auto planted = static_cast<std::size_t>(std::llround(spec.planted_relevance * static_cast<double>(m)));
      const auto chosen = permutation(rng, m);
      for (std::size_t c = 0; c < planted; ++c) {
        const auto& token = draft.text[chosen[c]];
        const auto direction = random_unit(rng, spec.dim);
        std::vector<double> noisy(spec.dim);
        for (std::size_t i = 0; i < spec.dim; ++i) noisy[i] = token[i] + spec.noise * direction[i];
        slots[positions[used++]] = normalized(noisy);
        planted_words.push_back(draft.words[chosen[c]]);
      }
    }
    Vec antipode;
    if (relevant && spec.adversarial) {
      const auto& query = queries[d];
      std::vector<double> mean(spec.dim, 0.0);
      for (std::size_t r = 0; r < query.rows(); ++r) {
        for (std::size_t i = 0; i < spec.dim; ++i) mean[i] -= query.row(r)[i];
      }
      antipode = normalized(mean);
    }
    for (; used < n; ++used) {
      slots[positions[used]] = antipode.empty() ? random_unit(rng, spec.dim) : antipode;
    }
    docs.push_back(to_embedding(numbered("doc", 6, d), spec, slots));
    auto page = render_page(spec, docs.back().id(), std::move(planted_words), d);
    data.pages.push_back(std::move(page.ocr));
    data.images.push_back(std::move(page.image));
  }

  data.corpus = Corpus::build(spec.dim, std::move(docs));
  data.queries = Corpus::build(spec.dim, std::move(queries));
  data.ocr_index = build_ocr_index(data.pages);
  return data;
}

Corpus generate_distractors(const SynthSpec& spec, std::size_t count, const std::string& id_prefix) {
  spec.validate();
  const auto shared = shared_vectors(spec);
  const std::size_t n = spec.patches_per_doc();
  std::vector<MultiVectorEmbedding> docs;
  docs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng(spec.seed, kStreamDistractor | i);
    std::vector<Vec> slots(n);
    const auto positions = permutation(rng, n);
    std::size_t used = place_specials(spec, shared, positions, slots);
    for (; used < n; ++used) slots[positions[used]] = random_unit(rng, spec.dim);
    docs.push_back(to_embedding(numbered(id_prefix.c_str(), 7, i), spec, slots));
  }
  return Corpus::build(spec.dim, std::move(docs));
}

void write_synth(const SynthData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "images");
  write_corpus(data.corpus, dir / "corpus.vdre");
  write_corpus(data.queries, dir / "queries.vdre");
  write_token_sidecar(data.queries, dir / "queries.tokens.jsonl");
  write_qrels(data.qrels, dir / "qrels.tsv");
  write_ocr_pages(data.pages, dir / "ocr.jsonl");
  for (std::size_t i = 0; i < data.pages.size(); ++i) {
    write_pgm(data.images[i], dir / "images" / (data.pages[i].doc_id + ".pgm"));
  }
}

}  // namespace vdr
