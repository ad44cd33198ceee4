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

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "vdr/index_search.hpp"
#include "vdr/synth.hpp"

namespace vdr {
namespace {

using testing::embedding;

Corpus random_corpus(std::mt19937_64& rng, std::size_t docs, std::size_t rows, std::size_t dim) {
  std::vector<MultiVectorEmbedding> entries;
  for (std::size_t i = 0; i < docs; ++i) {
    entries.push_back(embedding("d" + std::to_string(1000 + i), testing::unit_rows(rng, rows, dim)));
  }
  return Corpus::build(dim, std::move(entries));
}

// Scores every document from scratch with the double-precision oracle and
// sorts by (score desc, id asc).
std::vector<std::string> oracle_order(const Corpus& corpus, const MultiVectorEmbedding& query) {
  std::vector<std::pair<double, std::string>> scored;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    scored.emplace_back(testing::naive_maxsim(testing::rows_of(query), testing::rows_of(corpus[i])),
                        corpus[i].id());
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> ids;
  for (auto& s : scored) ids.push_back(s.second);
  return ids;
}

TEST(Search, SingletonCorpus) {
  auto corpus = Corpus::build(2, {embedding("only", {{0, 1}})});
  auto q = embedding("q", {{1, 0}});
  for (auto kind : {ScoreKind::kPooled, ScoreKind::kMaxSim}) {
    auto r = search(corpus, q, {kind, MaskKind::kAll}, 10);
    ASSERT_EQ(r.hits.size(), 1u);
    EXPECT_EQ(r.hits[0].doc_id, "only");
    EXPECT_EQ(r.hits[0].rank, 1u);
  }
}

TEST(Search, DocContainingQueryRowsRanksFirst) {
  std::mt19937_64 rng(1);
  auto qrows = testing::unit_rows(rng, 4, 16);
  auto b_rows = testing::unit_rows(rng, 6, 16);
  b_rows.insert(b_rows.begin() + 2, qrows.begin(), qrows.end());
  auto corpus = Corpus::build(16, {embedding("A", testing::unit_rows(rng, 10, 16)), embedding("B", b_rows),
                                   embedding("C", testing::unit_rows(rng, 10, 16))});
  auto r = search(corpus, embedding("q", qrows), {ScoreKind::kMaxSim, MaskKind::kAll}, 3);
  EXPECT_EQ(r.hits[0].doc_id, "B");
  EXPECT_NEAR(r.hits[0].score, 4.0, 1e-5);
}

TEST(Search, MatchesBruteForceOracle) {
  std::mt19937_64 rng(50);
  auto corpus = random_corpus(rng, 50, 12, 24);
  for (int t = 0; t < 10; ++t) {
    auto q = embedding("q", testing::unit_rows(rng, 5, 24));
    auto r = search(corpus, q, {ScoreKind::kMaxSim, MaskKind::kAll}, 10);
    auto expected = oracle_order(corpus, q);
    ASSERT_EQ(r.hits.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(r.hits[i].doc_id, expected[i]) << i;
      EXPECT_EQ(r.hits[i].rank, i + 1);
    }
  }
}

TEST(Search, TiesBrokenByDocId) {
  auto corpus = Corpus::build(2, {embedding("c", {{1, 0}}), embedding("a", {{1, 0}}),
                                  embedding("b", {{1, 0}})});
  auto r = search(corpus, embedding("q", {{1, 0}}), {}, 3);
  EXPECT_EQ(r.hits[0].doc_id, "a");
  EXPECT_EQ(r.hits[1].doc_id, "b");
  EXPECT_EQ(r.hits[2].doc_id, "c");
}

TEST(Search, SubsetConsistency) {
  std::mt19937_64 rng(77);
  auto corpus = random_corpus(rng, 40, 6, 8);
  auto q = embedding("q", testing::unit_rows(rng, 3, 8));
  for (auto kind : {ScoreKind::kPooled, ScoreKind::kMaxSim}) {
    auto top5 = search(corpus, q, {kind, MaskKind::kAll}, 5);
    auto top12 = search(corpus, q, {kind, MaskKind::kAll}, 12);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(top5.hits[i], top12.hits[i]);
  }
}

TEST(Search, ScoresNonIncreasing) {
  std::mt19937_64 rng(78);
  auto corpus = random_corpus(rng, 60, 6, 8);
  auto r = search(corpus, embedding("q", testing::unit_rows(rng, 3, 8)), {ScoreKind::kPooled}, 60);
  for (std::size_t i = 1; i < r.hits.size(); ++i) EXPECT_GE(r.hits[i - 1].score, r.hits[i].score);
}

TEST(Search, Errors) {
  auto corpus = Corpus::build(2, {embedding("a", {{1, 0}})});
  auto q = embedding("q", {{1, 0}}, {{"x", TokenKind::kQueryText}});
  EXPECT_THROW(search(corpus, q, {}, 0), ArgumentError);
  EXPECT_THROW(search(corpus, embedding("q", {{1, 0, 0}}), {}, 1), DimensionError);
  const ScoreMode lex{ScoreKind::kMaxSim, MaskKind::kQtmLexicalOnly};
  EXPECT_THROW(search(corpus, q, lex, 1), ArgumentError);
  OcrIndex missing;
  try {
    search(corpus, q, lex, 1, &missing);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
}

TEST(Search, EmptyMaskCountedAsWarning) {
  auto corpus = Corpus::build(2, {embedding("a", {{1, 0}}), embedding("b", {{0, 1}})});
  auto q = embedding("q", {{1, 0}}, {{"hello", TokenKind::kQueryText}});
  auto r = search(corpus, q, {ScoreKind::kMaxSim, MaskKind::kStmOnly}, 2);
  EXPECT_EQ(r.empty_mask_docs, 2u);
  EXPECT_EQ(r.hits[0].score, 0.0);
  EXPECT_EQ(r.hits[0].doc_id, "a");
}

TEST(Search, FirstRowPooling) {
  auto corpus = Corpus::build(2, {embedding("a", {{1, 0}, {0, 1}, {0, 1}}), embedding("b", {{0, 1}, {1, 0}})});
  SearchOptions options;
  options.pool_mode = PoolMode::kFirst;
  auto r = search(corpus, embedding("q", {{1, 0}}), {ScoreKind::kPooled}, 2, nullptr, options);
  EXPECT_EQ(r.hits[0].doc_id, "a");
  EXPECT_NEAR(r.hits[0].score, 1.0, 1e-7);
}

TEST(BatchSearch, EmptyQueryList) {
  auto corpus = Corpus::build(2, {embedding("a", {{1, 0}})});
  EXPECT_TRUE(batch_search(corpus, {}, {}, 5).empty());
}

TEST(BatchSearch, ParallelEqualsSequential) {
  std::mt19937_64 rng(9);
  auto corpus = random_corpus(rng, 300, 8, 16);
  std::vector<MultiVectorEmbedding> queries;
  for (int i = 0; i < 37; ++i) {
    queries.push_back(embedding("q" + std::to_string(i), testing::unit_rows(rng, 4, 16)));
  }
  SearchOptions parallel;
  parallel.workers = 4;
  auto batched = batch_search(corpus, queries, {}, 10, nullptr, parallel);
  ASSERT_EQ(batched.size(), queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    EXPECT_EQ(batched[i], search(corpus, queries[i], {}, 10));
  }
}

TEST(BatchSearch, ThousandQueriesTenThousandDocs) {
  SynthSpec spec;
  spec.seed = 3;
  spec.num_docs = 10;
  spec.num_queries = 10;
  spec.dim = 8;
  spec.grid_rows = 2;
  spec.grid_cols = 3;
  spec.min_text_tokens = 2;
  spec.max_text_tokens = 2;
  spec.pad_tokens = 1;
  spec.prompt_tokens = 1;
  spec.special_patches = false;
  const auto docs = generate_distractors(spec, 10000);
  const auto query_corpus = generate_distractors(spec, 1000, "query");
  const auto queries = entries_of(query_corpus);
  SearchOptions parallel;
  parallel.workers = 3;
  auto batched = batch_search(docs, queries, {}, 10, nullptr, parallel);
  auto sequential = batch_search(docs, queries, {}, 10);
  ASSERT_EQ(batched.size(), 1000u);
  EXPECT_EQ(batched, sequential);
}

TEST(BatchSearch, ErrorsAttributedToQueries) {
  auto corpus = Corpus::build(2, {embedding("a", {{1, 0}})});
  std::vector<MultiVectorEmbedding> queries{embedding("good", {{1, 0}}),
                                            embedding("bad", {{1, 0, 0}}),
                                            embedding("notokens", {{0, 1}})};
  try {
    batch_search(corpus, queries, {ScoreKind::kMaxSim, MaskKind::kQtmOnly}, 1);
    FAIL();
  } catch (const BatchSearchError& e) {
    ASSERT_EQ(e.failures().size(), 3u);  // "good" has no tokens either
    EXPECT_EQ(e.failures()[1].first, "bad");
  }
  try {
    batch_search(corpus, queries, {}, 1);
    FAIL();
  } catch (const BatchSearchError& e) {
    ASSERT_EQ(e.failures().size(), 1u);
    EXPECT_EQ(e.failures()[0].first, "bad");
  }
}

TEST(RunFile, FormatAndRoundtrip) {
  testing::TempDir dir;
  std::vector<Ranking> rankings{{"q1", {{"d2", 1.23456789012, 1}, {"d1", -0.5, 2}}, 0},
                                {"q0", {{"d1", 3.0, 1}}, 0}};
  std::ostringstream text;
  write_run(text, rankings, "tag");
  EXPECT_EQ(text.str(),
            "q1\tQ0\td2\t1\t1.23456789\ttag\n"
            "q1\tQ0\td1\t2\t-0.5\ttag\n"
            "q0\tQ0\td1\t1\t3\ttag\n");
  write_run_file(dir / "run.tsv", rankings, "tag");
  auto back = read_run_file(dir / "run.tsv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].query_id, "q1");
  EXPECT_EQ(back[0].hits[1].doc_id, "d1");
  EXPECT_DOUBLE_EQ(back[0].hits[0].score, 1.23456789);
}

}  // namespace
}  // namespace vdr
