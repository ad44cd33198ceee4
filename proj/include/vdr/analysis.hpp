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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vdr/evaluation.hpp"

namespace vdr {

struct AblationRow {
  MaskKind mask = MaskKind::kAll;
  double ndcg_at_5 = 0.0;
  // Percentage change against the unmasked run; empty when that run scores 0.
  std::optional<double> delta_percent;
};

struct AblationTable {
  std::vector<AblationRow> rows;
  double reference_ndcg = 0.0;  // the `all` run
  // Largest |all - (stm + qtm)| and |qtm - (lex + nonlex)| over every
  // scored (query, document) pair. The lexical residual is only computed
  // when an OCR index is supplied.
  double max_kind_residual = 0.0;
  std::optional<double> max_lexical_residual;
  std::size_t pairs_checked = 0;
};

struct AblationOptions {
  std::size_t workers = 1;
  MaskOptions mask_options;
};

// Runs one maxsim retrieval per mask and reports nDCG@5 with the relative
// change against the unmasked run.
AblationTable matching_ablation(const Corpus& corpus, std::span<const MultiVectorEmbedding> queries,
                                const Qrels& qrels, const OcrIndex* ocr_index,
                                std::span<const MaskKind> masks,
                                const AblationOptions& options = {});

std::vector<nlohmann::json> to_json_lines(const AblationTable& table);
std::string to_tsv(const AblationTable& table);

// Writes one JSON line per query token: text, kind, similarity to every
// patch, argmax patch and its (row, col) in the document grid.
void export_simmap(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                   std::ostream& out);
void export_simmap(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                   const std::filesystem::path& path);

}  // namespace vdr
