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
#include <filesystem>
#include <string>
#include <vector>

#include "vdr/coverage.hpp"
#include "vdr/evaluation.hpp"

namespace vdr {

// Counter-based SplitMix64: output k of stream s is
//   mix64(seed + s * 0xD1B54A32D192ED03 + (k + 1) * 0x9E3779B97F4A7C15)
// where mix64 is the SplitMix64 finalizer. Any output can be recomputed from
// (seed, stream, k) alone, which keeps generated fixtures portable.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [lo, hi].
  std::size_t uniform_int(std::size_t lo, std::size_t hi);
  // Standard normal via Box-Muller (one draw per two uniforms).
  double normal();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

struct SynthSpec {
  std::uint64_t seed = 7;
  std::size_t num_docs = 100;
  std::size_t num_queries = 20;
  std::uint32_t grid_rows = 4;  // patches per document = rows * cols
  std::uint32_t grid_cols = 4;
  std::size_t min_text_tokens = 4;
  std::size_t max_text_tokens = 8;
  std::size_t pad_tokens = 4;
  std::size_t prompt_tokens = 2;
  std::size_t dim = 32;
  // Fraction of a query's text tokens copied into its relevant document.
  double planted_relevance = 1.0;
  // Spherical noise added to planted copies before renormalization.
  double noise = 0.0;
  // Every document also carries the shared pad and prompt vectors as patches,
  // so special-token contributions are identical across documents.
  bool special_patches = true;
  // Fill the relevant document's free patches with the antipode of the
  // query's mean direction (defeats pooled scoring, not maxsim).
  bool adversarial = false;
  std::size_t vocabulary = 2000;
  std::size_t random_ocr_words = 6;
  std::size_t page_width = 96;
  std::size_t page_height = 96;

  std::size_t patches_per_doc() const {
    return static_cast<std::size_t>(grid_rows) * grid_cols;
  }
  void validate() const;
};

// Fixture where pooled scoring fails and maxsim does not.
SynthSpec adversarial_spec(std::uint64_t seed = 7);

struct SynthData {
  Corpus corpus;
  Corpus queries;
  Qrels qrels;
  std::vector<OcrPage> pages;     // same order as corpus
  std::vector<GrayImage> images;  // same order as corpus
  OcrIndex ocr_index;
};

SynthData generate(const SynthSpec& spec);

// Random documents with the same layout as generate()'s, never relevant.
// Ids are "<prefix>-NNNNNNN".
Corpus generate_distractors(const SynthSpec& spec, std::size_t count,
                            const std::string& id_prefix = "dis");

// Writes corpus.vdre, queries.vdre, queries.tokens.jsonl, qrels.tsv,
// ocr.jsonl and images/<doc_id>.pgm into `dir`.
void write_synth(const SynthData& data, const std::filesystem::path& dir);

}  // namespace vdr
