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

#include "vdr/index_search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace vdr {

namespace {

const OcrTokenSet& ocr_for(const OcrIndex* ocr_index, const std::string& doc_id) {
  auto it = ocr_index->find(doc_id);
  if (it == ocr_index->end()) {
    throw DataError("no OCR token set for document '" + doc_id + "'");
  }
  return it->second;
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", score);
  return buf;
}

}  // namespace

Ranking search(const Corpus& corpus, const MultiVectorEmbedding& query, const ScoreMode& mode,
               std::size_t k, const OcrIndex* ocr_index, const SearchOptions& options) {
  mode.validate();
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (query.dim() != corpus.dim()) {
    std::string msg = "query '" + query.id() + "' has h=" + std::to_string(query.dim()) +
                      ", corpus has h=" + std::to_string(corpus.dim());
    if (!corpus.empty()) msg += " (record '" + corpus[0].id() + "')";
    throw DimensionError(msg);
  }
  if (mode.lexical() && ocr_index == nullptr) {
    throw ArgumentError("mask '" + std::string(to_string(mode.mask)) + "' requires an OCR index");
  }

  const std::size_t n = corpus.size();
  std::vector<double> scores(n, 0.0);
  Ranking ranking;
  ranking.query_id = query.id();

  if (mode.kind == ScoreKind::kPooled) {
    const auto q = pool(query, options.pool_mode);
    for (std::size_t i = 0; i < n; ++i) {
      if (options.pool_mode == PoolMode::kMean) {
        scores[i] = dot(q, corpus.pooled(i));
      } else {
        scores[i] = dot(q, pool(corpus[i], options.pool_mode));
      }
    }
  } else {
    TokenMask shared_mask;
    if (!mode.lexical()) shared_mask = masks_for(query, mode, nullptr, options.mask_options);
    std::vector<float> maxima(query.rows());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& doc = corpus[i];
      TokenMask lexical_mask;
      if (mode.lexical()) {
        lexical_mask = masks_for(query, mode, &ocr_for(ocr_index, doc.id()), options.mask_options);
      }
      const TokenMask& mask = mode.lexical() ? lexical_mask : shared_mask;
      token_maxima(query, doc, maxima);
      double total = 0.0;
      std::size_t active = 0;
      for (std::size_t t = 0; t < maxima.size(); ++t) {
        if (!mask.active[t]) continue;
        total += maxima[t];
        ++active;
      }
      if (active == 0) ++ranking.empty_mask_docs;
      scores[i] = total;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t top = std::min(k, n);
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return corpus[a].id() < corpus[b].id();
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    better);
  ranking.hits.reserve(top);
  for (std::size_t r = 0; r < top; ++r) {
    ranking.hits.push_back({corpus[order[r]].id(), scores[order[r]], r + 1});
  }
  return ranking;
}

BatchSearchError::BatchSearchError(std::vector<std::pair<std::string, std::string>> failures)
    : Error([&] {
        std::string msg = std::to_string(failures.size()) + " quer" +
                          (failures.size() == 1 ? "y" : "ies") + " failed";
        for (const auto& [id, what] : failures) msg += "\n  query '" + id + "': " + what;
        return msg;
      }()),
      failures_(std::move(failures)) {}

std::vector<Ranking> batch_search(const Corpus& corpus, std::span<const MultiVectorEmbedding> queries,
                                  const ScoreMode& mode, std::size_t k, const OcrIndex* ocr_index,
                                  const SearchOptions& options, std::vector<double>* latencies) {
  // argument problems are shared by every query; report them once, unwrapped
  mode.validate();
  if (mode.lexical() && ocr_index == nullptr) {
    throw ArgumentError("mask '" + std::string(to_string(mode.mask)) + "' requires an OCR index");
  }
  std::vector<Ranking> results(queries.size());
  std::vector<std::string> errors(queries.size());
  if (latencies) latencies->assign(queries.size(), 0.0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < queries.size(); i = next.fetch_add(1)) {
      const auto start = std::chrono::steady_clock::now();
      try {
        results[i] = search(corpus, queries[i], mode, k, ocr_index, options);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown error";
      }
      if (latencies) {
        (*latencies)[i] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(queries.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<std::pair<std::string, std::string>> failures;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (!errors[i].empty()) failures.emplace_back(queries[i].id(), errors[i]);
  }
  if (!failures.empty()) throw BatchSearchError(std::move(failures));
  return results;
}

void write_run(std::ostream& out, std::span<const Ranking> rankings, const std::string& tag) {
  for (const auto& ranking : rankings) {
    for (const auto& hit : ranking.hits) {
      out << ranking.query_id << "\tQ0\t" << hit.doc_id << '\t' << hit.rank << '\t'
          << format_score(hit.score) << '\t' << tag << '\n';
    }
  }
}

void write_run_file(const std::filesystem::path& path, std::span<const Ranking> rankings,
                    const std::string& tag) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_run(out, rankings, tag);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<Ranking> read_run_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<Ranking> rankings;
  std::unordered_map<std::string, std::size_t> slot;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string qid, q0, doc_id, tag;
    std::size_t rank = 0;
    double score = 0.0;
    if (!(fields >> qid >> q0 >> doc_id >> rank >> score)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'query_id Q0 doc_id rank score tag'");
    }
    auto [it, inserted] = slot.emplace(qid, rankings.size());
    if (inserted) rankings.push_back(Ranking{qid, {}, 0});
    rankings[it->second].hits.push_back({doc_id, score, rank});
  }
  for (auto& ranking : rankings) {
    std::stable_sort(ranking.hits.begin(), ranking.hits.end(),
                     [](const Hit& a, const Hit& b) { return a.rank < b.rank; });
  }
  return rankings;
}

}  // namespace vdr
