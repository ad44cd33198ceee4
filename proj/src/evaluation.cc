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

#include "vdr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace vdr {

namespace {

const std::map<std::string, int>& judgments_for(const Ranking& ranking, const Qrels& qrels) {
  auto it = qrels.find(ranking.query_id);
  if (it == qrels.end()) {
    throw EvaluationError("no qrels entry for query '" + ranking.query_id + "'");
  }
  return it->second;
}

int grade_of(const std::map<std::string, int>& judged, const std::string& doc_id) {
  auto it = judged.find(doc_id);
  return it == judged.end() ? 0 : it->second;
}

}  // namespace

Qrels load_qrels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string qid, iter, doc_id;
    long grade = 0;
    if (!(fields >> qid >> iter >> doc_id >> grade)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'query_id 0 doc_id grade'");
    }
    if (grade < 0) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": negative grade");
    }
    qrels[qid][doc_id] = static_cast<int>(grade);
  }
  return qrels;
}

void write_qrels(const Qrels& qrels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& [qid, docs] : qrels) {
    for (const auto& [doc_id, grade] : docs) out << qid << "\t0\t" << doc_id << '\t' << grade << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

double ndcg_at_k(const Ranking& ranking, const Qrels& qrels, std::size_t k) {
  const auto& judged = judgments_for(ranking, qrels);
  std::vector<int> grades;
  for (const auto& [doc, grade] : judged) {
    if (grade > 0) grades.push_back(grade);
  }
  if (grades.empty()) {
    throw EvaluationError("query '" + ranking.query_id +
                          "' has no relevant documents; ideal DCG is 0");
  }
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double ideal = 0.0;
  for (std::size_t r = 0; r < std::min(k, grades.size()); ++r) {
    ideal += grades[r] / std::log2(static_cast<double>(r) + 2.0);
  }
  double dcg = 0.0;
  for (std::size_t r = 0; r < std::min(k, ranking.hits.size()); ++r) {
    const int grade = grade_of(judged, ranking.hits[r].doc_id);
    if (grade > 0) dcg += grade / std::log2(static_cast<double>(r) + 2.0);
  }
  return dcg / ideal;
}

double recall_at_k(const Ranking& ranking, const Qrels& qrels, std::size_t k) {
  const auto& judged = judgments_for(ranking, qrels);
  std::size_t relevant = 0;
  for (const auto& [doc, grade] : judged) relevant += grade > 0 ? 1 : 0;
  if (relevant == 0) {
    throw EvaluationError("query '" + ranking.query_id + "' has no relevant documents");
  }
  std::size_t found = 0;
  for (std::size_t r = 0; r < std::min(k, ranking.hits.size()); ++r) {
    found += grade_of(judged, ranking.hits[r].doc_id) > 0 ? 1 : 0;
  }
  return static_cast<double>(found) / static_cast<double>(relevant);
}

EvalReport evaluate(std::span<const Ranking> rankings, const Qrels& qrels, std::size_t ndcg_k,
                    std::size_t recall_k) {
  EvalReport report;
  report.ndcg_k = ndcg_k;
  report.recall_k = recall_k;
  for (const auto& ranking : rankings) {
    report.per_query.push_back({ranking.query_id, ndcg_at_k(ranking, qrels, ndcg_k),
                                recall_at_k(ranking, qrels, recall_k)});
  }
  if (!report.per_query.empty()) {
    double ndcg = 0.0, recall = 0.0;
    for (const auto& m : report.per_query) {
      ndcg += m.ndcg;
      recall += m.recall;
    }
    report.mean_ndcg = ndcg / static_cast<double>(report.per_query.size());
    report.mean_recall = recall / static_cast<double>(report.per_query.size());
  }
  return report;
}

std::vector<nlohmann::json> to_json_lines(const EvalReport& report) {
  const std::string ndcg_key = "ndcg@" + std::to_string(report.ndcg_k);
  const std::string recall_key = "recall@" + std::to_string(report.recall_k);
  std::vector<nlohmann::json> lines;
  for (const auto& m : report.per_query) {
    lines.push_back({{"query_id", m.query_id}, {ndcg_key, m.ndcg}, {recall_key, m.recall}});
  }
  lines.push_back({{"summary",
                    {{"queries", report.per_query.size()},
                     {ndcg_key, report.mean_ndcg},
                     {recall_key, report.mean_recall}}}});
  return lines;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q * static_cast<double>(values.size()));
  const std::size_t index = rank < 1.0 ? 0 : static_cast<std::size_t>(rank) - 1;
  return values[std::min(index, values.size() - 1)];
}

nlohmann::json to_json(const LatencyReport& report) {
  return {{"corpus_size", report.corpus_size},
          {"mode", std::string(to_string(report.mode.kind))},
          {"mask", std::string(to_string(report.mode.mask))},
          {"workers", report.workers},
          {"queries", report.latencies.size()},
          {"latency_seconds", report.latencies},
          {"mean", report.mean},
          {"p50", report.p50},
          {"p95", report.p95},
          {"ndcg@5", report.ndcg_at_5}};
}

std::vector<LatencyReport> bench_scaling(std::span<const std::size_t> corpus_sizes,
                                         const Corpus& base, const Corpus& distractors,
                                         std::span<const MultiVectorEmbedding> queries,
                                         const Qrels& qrels, const ScoreMode& mode,
                                         const BenchOptions& options) {
  if (base.dim() != distractors.dim() && !distractors.empty()) {
    throw DimensionError("distractor corpus has h=" + std::to_string(distractors.dim()) +
                         ", base corpus has h=" + std::to_string(base.dim()));
  }
  std::unordered_set<std::string> relevant;
  for (const auto& [qid, docs] : qrels) {
    for (const auto& [doc_id, grade] : docs) {
      if (grade > 0) relevant.insert(doc_id);
    }
  }
  for (std::size_t i = 0; i < distractors.size(); ++i) {
    const auto& id = distractors[i].id();
    if (base.find(id)) throw DataError("distractor id '" + id + "' duplicates a base document");
    if (relevant.contains(id)) throw DataError("distractor '" + id + "' is judged relevant");
  }
  const std::size_t available = base.size() + distractors.size();
  std::size_t previous = 0;
  for (std::size_t size : corpus_sizes) {
    if (size < previous) throw ArgumentError("corpus sizes must be ascending");
    if (size < base.size()) {
      throw ArgumentError("corpus size " + std::to_string(size) + " is below the base corpus size " +
                          std::to_string(base.size()));
    }
    if (size > available) {
      throw ArgumentError("corpus size " + std::to_string(size) + " needs " +
                          std::to_string(size - base.size()) + " distractors, only " +
                          std::to_string(distractors.size()) + " available");
    }
    previous = size;
  }

  SearchOptions search_options = options.search;
  search_options.workers = options.workers;
  std::vector<LatencyReport> reports;
  for (std::size_t size : corpus_sizes) {
    std::vector<Corpus::EntryPtr> entries(base.shared_entries());
    const auto& extra = distractors.shared_entries();
    entries.insert(entries.end(), extra.begin(),
                   extra.begin() + static_cast<std::ptrdiff_t>(size - base.size()));
    const Corpus corpus = Corpus::from_shared(base.dim(), std::move(entries));

    batch_search(corpus, queries, mode, options.k, nullptr, search_options);  // warm-up
    LatencyReport report;
    const auto rankings =
        batch_search(corpus, queries, mode, options.k, nullptr, search_options, &report.latencies);
    report.corpus_size = size;
    report.mode = mode;
    report.workers = options.workers;
    if (!report.latencies.empty()) {
      report.mean = std::accumulate(report.latencies.begin(), report.latencies.end(), 0.0) /
                    static_cast<double>(report.latencies.size());
    }
    report.p50 = percentile(report.latencies, 0.50);
    report.p95 = percentile(report.latencies, 0.95);
    report.ndcg_at_5 = evaluate(rankings, qrels, 5, 1).mean_ndcg;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace vdr
