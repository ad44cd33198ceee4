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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vdr/index_search.hpp"

namespace vdr {

// query_id -> doc_id -> grade. Unjudged documents are non-relevant.
using Qrels = std::map<std::string, std::map<std::string, int>>;

// Whitespace-separated: query_id 0 doc_id grade.
Qrels load_qrels(const std::filesystem::path& path);
void write_qrels(const Qrels& qrels, const std::filesystem::path& path);

// Gain = grade, discount 1/log2(rank + 1), normalized by the ideal DCG@k of
// the query's full judgments.
double ndcg_at_k(const Ranking& ranking, const Qrels& qrels, std::size_t k);
// Fraction of the query's relevant (grade > 0) documents in the top k.
double recall_at_k(const Ranking& ranking, const Qrels& qrels, std::size_t k);

struct QueryMetrics {
  std::string query_id;
  double ndcg = 0.0;
  double recall = 0.0;
};

struct EvalReport {
  std::size_t ndcg_k = 5;
  std::size_t recall_k = 1;
  std::vector<QueryMetrics> per_query;
  double mean_ndcg = 0.0;
  double mean_recall = 0.0;
};

EvalReport evaluate(std::span<const Ranking> rankings, const Qrels& qrels, std::size_t ndcg_k = 5,
                    std::size_t recall_k = 1);
// One line per query followed by a {"summary": ...} line.
std::vector<nlohmann::json> to_json_lines(const EvalReport& report);

struct LatencyReport {
  std::size_t corpus_size = 0;
  ScoreMode mode;
  std::size_t workers = 1;
  std::vector<double> latencies;  // seconds, one per query
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double ndcg_at_5 = 0.0;
};

nlohmann::json to_json(const LatencyReport& report);

struct BenchOptions {
  std::size_t workers = 1;
  std::size_t k = 5;
  SearchOptions search;
};

// For every size m, indexes base + the first (m - |base|) distractors, runs
// one discarded warm-up pass and one timed pass of batch_search, and reports
// per-query latency and nDCG@5.
std::vector<LatencyReport> bench_scaling(std::span<const std::size_t> corpus_sizes,
                                         const Corpus& base, const Corpus& distractors,
                                         std::span<const MultiVectorEmbedding> queries,
                                         const Qrels& qrels, const ScoreMode& mode,
                                         const BenchOptions& options = {});

// Nearest-rank percentile, q in [0, 1].
double percentile(std::vector<double> values, double q);

}  // namespace vdr
