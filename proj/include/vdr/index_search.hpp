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
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vdr/corpus_store.hpp"
#include "vdr/errors.hpp"
#include "vdr/scoring.hpp"

namespace vdr {

struct Hit {
  std::string doc_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based

  bool operator==(const Hit&) const = default;
};

// Hits ordered by score descending, ties by ascending doc_id.
struct Ranking {
  std::string query_id;
  std::vector<Hit> hits;
  // Documents that were scored with an empty token mask (score fixed at 0).
  std::size_t empty_mask_docs = 0;

  bool operator==(const Ranking&) const = default;
};

using OcrIndex = std::unordered_map<std::string, OcrTokenSet>;

struct SearchOptions {
  PoolMode pool_mode = PoolMode::kMean;
  MaskOptions mask_options;
  std::size_t workers = 1;
};

Ranking search(const Corpus& corpus, const MultiVectorEmbedding& query, const ScoreMode& mode,
               std::size_t k, const OcrIndex* ocr_index = nullptr,
               const SearchOptions& options = {});

// Raised by batch_search after every query has been attempted.
class BatchSearchError : public Error {
 public:
  explicit BatchSearchError(std::vector<std::pair<std::string, std::string>> failures);
  const std::vector<std::pair<std::string, std::string>>& failures() const { return failures_; }

 private:
  std::vector<std::pair<std::string, std::string>> failures_;
};

// Result i corresponds to queries[i]. Queries are spread over
// options.workers threads. When `latencies` is non-null it receives the
// wall-clock seconds spent on each query (score + sort).
std::vector<Ranking> batch_search(const Corpus& corpus, std::span<const MultiVectorEmbedding> queries,
                                  const ScoreMode& mode, std::size_t k,
                                  const OcrIndex* ocr_index = nullptr,
                                  const SearchOptions& options = {},
                                  std::vector<double>* latencies = nullptr);

// Six-column run format: qid Q0 docid rank score tag, tab separated, score
// printed with 9 significant digits.
void write_run(std::ostream& out, std::span<const Ranking> rankings, const std::string& tag);
void write_run_file(const std::filesystem::path& path, std::span<const Ranking> rankings,
                    const std::string& tag);
// Reads a run file back; hits are re-sorted by rank. Query order follows
// first appearance in the file.
std::vector<Ranking> read_run_file(const std::filesystem::path& path);

}  // namespace vdr
