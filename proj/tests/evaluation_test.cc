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
#include <random>

#include "fixtures.hpp"
#include "vdr/evaluation.hpp"
#include "vdr/synth.hpp"

namespace vdr {
namespace {

Ranking ranking(const std::string& qid, std::vector<std::string> docs) {
  Ranking r{qid, {}, 0};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    r.hits.push_back({docs[i], static_cast<double>(docs.size() - i), i + 1});
  }
  return r;
}

TEST(Ndcg, HandCases) {
  const Qrels qrels{{"q", {{"rel", 1}}}};
  EXPECT_DOUBLE_EQ(ndcg_at_k(ranking("q", {"rel", "x", "y"}), qrels, 5), 1.0);
  EXPECT_NEAR(ndcg_at_k(ranking("q", {"x", "rel", "y"}), qrels, 5), 0.6309297535714575, 1e-12);
  EXPECT_EQ(ndcg_at_k(ranking("q", {"a", "b", "c", "d", "e", "rel"}), qrels, 5), 0.0);
}

TEST(Ndcg, GradedIdealUsesFullQrels) {
  const Qrels qrels{{"q", {{"a", 2}, {"b", 1}, {"c", 0}}}};
  EXPECT_DOUBLE_EQ(ndcg_at_k(ranking("q", {"a", "b"}), qrels, 5), 1.0);
  EXPECT_LT(ndcg_at_k(ranking("q", {"b", "a"}), qrels, 5), 1.0);
  // only the top-k of the ideal ordering is used for normalization
  EXPECT_DOUBLE_EQ(ndcg_at_k(ranking("q", {"a"}), qrels, 1), 1.0);
}

TEST(Ndcg, Errors) {
  EXPECT_THROW(ndcg_at_k(ranking("q", {"a"}), Qrels{}, 5), EvaluationError);
  EXPECT_THROW(ndcg_at_k(ranking("q", {"a"}), Qrels{{"q", {{"a", 0}}}}, 5), EvaluationError);
  EXPECT_THROW(recall_at_k(ranking("q", {"a"}), Qrels{{"q", {{"a", 0}}}}, 5), EvaluationError);
}

TEST(Recall, HandCases) {
  const Qrels one{{"q", {{"rel", 1}}}};
  EXPECT_EQ(recall_at_k(ranking("q", {"rel", "x"}), one, 1), 1.0);
  EXPECT_EQ(recall_at_k(ranking("q", {"x", "rel"}), one, 1), 0.0);
  const Qrels two{{"q", {{"r1", 1}, {"r2", 1}}}};
  EXPECT_EQ(recall_at_k(ranking("q", {"a", "r2", "b", "c", "d", "r1"}), two, 5), 0.5);
}

TEST(Metrics, MatchFromDefinitionEvaluator) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pool_size(1, 20), grade(0, 3);
  for (int t = 0; t < 200; ++t) {
    const int n = pool_size(rng);
    std::vector<std::string> docs;
    for (int i = 0; i < n; ++i) docs.push_back("d" + std::to_string(i));
    std::map<std::string, int> grades;
    for (const auto& d : docs) {
      if (std::bernoulli_distribution(0.4)(rng)) grades[d] = grade(rng);
    }
    grades["d0"] = 1 + grade(rng) % 3;  // at least one relevant
    std::shuffle(docs.begin(), docs.end(), rng);
    const Qrels qrels{{"q", grades}};
    for (std::size_t k : {1u, 3u, 5u, 10u}) {
      EXPECT_NEAR(ndcg_at_k(ranking("q", docs), qrels, k), testing::naive_ndcg(docs, grades, k), 1e-9);
      EXPECT_NEAR(recall_at_k(ranking("q", docs), qrels, k), testing::naive_recall(docs, grades, k),
                  1e-9);
    }
  }
}

TEST(Evaluate, AveragesAndJson) {
  const Qrels qrels{{"q1", {{"a", 1}}}, {"q2", {{"b", 1}}}};
  std::vector<Ranking> runs{ranking("q1", {"a", "b"}), ranking("q2", {"a", "b"})};
  auto report = evaluate(runs, qrels);
  EXPECT_NEAR(report.mean_ndcg, (1.0 + 0.6309297535714575) / 2, 1e-12);
  EXPECT_NEAR(report.mean_recall, 0.5, 0);
  auto lines = to_json_lines(report);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0]["query_id"], "q1");
  EXPECT_DOUBLE_EQ(lines[2]["summary"]["recall@1"].get<double>(), 0.5);
}

TEST(Qrels, LoadAndWrite) {
  testing::TempDir dir;
  std::ofstream(dir / "q.tsv") << "q1\t0\td1\t1\nq1 0 d2 0\n\nq2\t0\td3\t2\n";
  auto qrels = load_qrels(dir / "q.tsv");
  EXPECT_EQ(qrels.at("q1").at("d2"), 0);
  EXPECT_EQ(qrels.at("q2").at("d3"), 2);
  write_qrels(qrels, dir / "out.tsv");
  EXPECT_EQ(load_qrels(dir / "out.tsv"), qrels);
  std::ofstream(dir / "bad.tsv") << "q1 0 d1\n";
  EXPECT_THROW(load_qrels(dir / "bad.tsv"), DataError);
  std::ofstream(dir / "neg.tsv") << "q1 0 d1 -1\n";
  EXPECT_THROW(load_qrels(dir / "neg.tsv"), DataError);
}

TEST(Percentile, NearestRank) {
  EXPECT_EQ(percentile({5, 1, 3, 2, 4}, 0.5), 3);
  EXPECT_EQ(percentile({5, 1, 3, 2, 4}, 0.95), 5);
  EXPECT_EQ(percentile({}, 0.5), 0);
}

class BenchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    spec_.seed = 12;
    spec_.num_docs = 60;
    spec_.num_queries = 10;
    spec_.noise = 2.0;
    spec_.planted_relevance = 0.5;
    data_ = generate(spec_);
    distractors_ = generate_distractors(spec_, 1000);
    queries_ = entries_of(data_.queries);
  }
  SynthSpec spec_;
  SynthData data_;
  Corpus distractors_;
  std::vector<MultiVectorEmbedding> queries_;
};

TEST_F(BenchTest, SingleSizeEqualsDirectEvaluation) {
  const std::size_t sizes[] = {60};
  auto reports = bench_scaling(sizes, data_.corpus, distractors_, queries_, data_.qrels, {});
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].latencies.size(), queries_.size());
  const auto direct = evaluate(batch_search(data_.corpus, queries_, {}, 5), data_.qrels).mean_ndcg;
  EXPECT_EQ(reports[0].ndcg_at_5, direct);
  EXPECT_LE(reports[0].p50, reports[0].p95);
}

TEST_F(BenchTest, NdcgNonIncreasingWithDistractors) {
  const std::size_t sizes[] = {60, 260, 1060};
  auto reports = bench_scaling(sizes, data_.corpus, distractors_, queries_, data_.qrels, {});
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_LT(reports[0].ndcg_at_5, 1.0);  // noise makes the fixture non-trivial
  EXPECT_GE(reports[0].ndcg_at_5, reports[1].ndcg_at_5);
  EXPECT_GE(reports[1].ndcg_at_5, reports[2].ndcg_at_5);
  auto json = to_json(reports[2]);
  EXPECT_EQ(json["corpus_size"], 1060);
  EXPECT_EQ(json["latency_seconds"].size(), queries_.size());
}

TEST_F(BenchTest, Errors) {
  const std::size_t too_big[] = {60, 5000};
  EXPECT_THROW(bench_scaling(too_big, data_.corpus, distractors_, queries_, data_.qrels, {}),
               ArgumentError);
  const std::size_t descending[] = {500, 100};
  EXPECT_THROW(bench_scaling(descending, data_.corpus, distractors_, queries_, data_.qrels, {}),
               ArgumentError);
  const std::size_t ok[] = {60};
  EXPECT_THROW(bench_scaling(ok, data_.corpus, data_.corpus, queries_, data_.qrels, {}), DataError);
}

}  // namespace
}  // namespace vdr
