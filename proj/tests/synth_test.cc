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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "vdr/corpus_io.hpp"
#include "vdr/synth.hpp"

namespace vdr {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double recall_at_1(const SynthData& data, const Corpus& corpus, ScoreKind kind) {
  auto queries = entries_of(data.queries);
  auto runs = batch_search(corpus, queries, ScoreMode{kind, MaskKind::kAll}, 5);
  return evaluate(runs, data.qrels, 5, 1).mean_recall;
}

TEST(CounterRng, Deterministic) {
  CounterRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
    EXPECT_NE(x, d.next_u64());
  }
  EXPECT_EQ(a.counter(), 100u);
}

TEST(CounterRng, Ranges) {
  CounterRng rng(1, 0);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const auto k = rng.uniform_int(3, 5);
    ASSERT_GE(k, 3u);
    ASSERT_LE(k, 5u);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / 20000, 0.0, 0.05);
  EXPECT_NEAR(sq / 20000, 1.0, 0.05);
  EXPECT_EQ(rng.uniform_int(4, 4), 4u);
}

TEST(Synth, ShapeAndLabels) {
  SynthSpec spec;
  spec.num_docs = 30;
  spec.num_queries = 10;
  auto data = generate(spec);
  EXPECT_EQ(data.corpus.size(), 30u);
  EXPECT_EQ(data.queries.size(), 10u);
  EXPECT_EQ(data.pages.size(), 30u);
  EXPECT_EQ(data.images.size(), 30u);
  EXPECT_EQ(data.ocr_index.size(), 30u);
  EXPECT_EQ(data.qrels.size(), 10u);
  EXPECT_EQ(data.qrels.at("q-00003").at("doc-000003"), 1);
  for (const auto& q : data.queries.shared_entries()) {
    ASSERT_TRUE(q->has_tokens());
    EXPECT_EQ(q->tokens().front().kind, TokenKind::kPrompt);
    EXPECT_EQ(q->tokens().back().kind, TokenKind::kSpecialPad);
    EXPECT_GE(q->rows(), 4u + 4u + 2u);
    EXPECT_LE(q->rows(), 8u + 4u + 2u);
  }
  for (const auto& d : data.corpus.shared_entries()) {
    EXPECT_EQ(d->rows(), 16u);
    ASSERT_TRUE(d->grid());
  }
  // every planted text token of q-i appears in doc-i's OCR
  const auto& q0 = data.queries.by_id("q-00000");
  for (const auto& t : q0.tokens()) {
    if (t.kind == TokenKind::kQueryText) {
      EXPECT_TRUE(data.ocr_index.at("doc-000000").count(normalize_token(t.text)));
    }
  }
}

TEST(Synth, ValidatesSpec) {
  SynthSpec spec;
  spec.dim = 7;
  EXPECT_THROW(generate(spec), ArgumentError);
  spec = {};
  spec.num_queries = spec.num_docs + 1;
  EXPECT_THROW(generate(spec), ArgumentError);
  spec = {};
  spec.min_text_tokens = 9;
  EXPECT_THROW(generate(spec), ArgumentError);
}

TEST(Synth, SameSeedSameBytes) {
  testing::TempDir dir;
  write_synth(generate(SynthSpec{}), dir / "a");
  write_synth(generate(SynthSpec{}), dir / "b");
  SynthSpec other;
  other.seed = 8;
  write_synth(generate(other), dir / "c");
  for (const char* name : {"corpus.vdre", "queries.vdre", "queries.tokens.jsonl", "qrels.tsv", "ocr.jsonl",
                           "images/doc-000042.pgm"}) {
    const auto a = slurp(dir / "a" / name);
    EXPECT_FALSE(a.empty()) << name;
    EXPECT_EQ(a, slurp(dir / "b" / name)) << name;
  }
  EXPECT_NE(slurp(dir / "a" / "corpus.vdre"), slurp(dir / "c" / "corpus.vdre"));
  auto back = load_corpus(dir / "a" / "corpus.vdre");
  EXPECT_EQ(back, generate(SynthSpec{}).corpus);
}

TEST(Synth, DistractorsAreDeterministicAndDistinct) {
  SynthSpec spec;
  auto a = generate_distractors(spec, 50);
  auto b = generate_distractors(spec, 50);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.at(0).id(), "dis-0000000");
  // a prefix of a longer set is the shorter set
  auto longer = generate_distractors(spec, 80);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(a.at(i), longer.at(i));
}

TEST(Synth, PlantedRelevanceIsFoundByMaxSim) {
  SynthSpec spec;
  auto data = generate(spec);
  auto all = entries_of(data.corpus);
  for (auto& d : entries_of(generate_distractors(spec, 2000))) all.push_back(std::move(d));
  auto big = Corpus::build(spec.dim, std::move(all));
  EXPECT_EQ(recall_at_1(data, big, ScoreKind::kMaxSim), 1.0);
}

TEST(Synth, AdversarialDefeatsPooling) {
  for (std::uint64_t seed : {7u, 11u, 12345u}) {
    auto data = generate(adversarial_spec(seed));
    EXPECT_EQ(recall_at_1(data, data.corpus, ScoreKind::kMaxSim), 1.0) << seed;
    EXPECT_LE(recall_at_1(data, data.corpus, ScoreKind::kPooled), 0.8) << seed;
  }
}

TEST(Synth, PagesHaveCoverageStructure) {
  auto data = generate(SynthSpec{});
  for (std::size_t i = 0; i < data.pages.size(); ++i) {
    const auto& page = data.pages[i];
    EXPECT_EQ(page.doc_id, data.corpus.at(i).id());
    EXPECT_FALSE(page.boxes.empty());
    EXPECT_EQ(data.images[i].pixels.size(), page.width * page.height);
    auto f = coverage(page, background_mask(data.images[i]));
    EXPECT_GT(f.c_text, 0.0);
    EXPECT_GT(f.c_background, 0.0);
  }
}

}  // namespace
}  // namespace vdr
