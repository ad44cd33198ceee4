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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vdr/analysis.hpp"

namespace vdr {

namespace {

double masked_sum(std::span<const float> maxima, const TokenMask& mask) {
  double total = 0.0;
  for (std::size_t i = 0; i < maxima.size(); ++i) {
    if (mask.active[i]) total += maxima[i];
  }
  return total;
}

}  // namespace

AblationTable matching_ablation(const Corpus& corpus, std::span<const MultiVectorEmbedding> queries,
                                const Qrels& qrels, const OcrIndex* ocr_index,
                                std::span<const MaskKind> masks, const AblationOptions& options) {
  SearchOptions search_options;
  search_options.workers = options.workers;
  search_options.mask_options = options.mask_options;

  auto run = [&](MaskKind mask) {
    const ScoreMode mode{ScoreKind::kMaxSim, mask};
    const auto rankings = batch_search(corpus, queries, mode, 5, ocr_index, search_options);
    return evaluate(rankings, qrels, 5, 1).mean_ndcg;
  };

  AblationTable table;
  const bool has_all = std::find(masks.begin(), masks.end(), MaskKind::kAll) != masks.end();
  std::optional<double> reference;
  if (!has_all) reference = run(MaskKind::kAll);
  for (MaskKind mask : masks) {
    const double ndcg = (mask == MaskKind::kAll && reference) ? *reference : run(mask);
    if (mask == MaskKind::kAll) reference = ndcg;
    table.rows.push_back({mask, ndcg, std::nullopt});
  }
  table.reference_ndcg = *reference;
  for (auto& row : table.rows) {
    if (table.reference_ndcg > 0.0) {
      row.delta_percent = (row.ndcg_at_5 - table.reference_ndcg) / table.reference_ndcg * 100.0;
    }
  }

  const MaskOptions& mo = options.mask_options;
  const bool lexical = ocr_index != nullptr;
  if (lexical) table.max_lexical_residual = 0.0;
  std::vector<float> maxima;
  for (const auto& query : queries) {
    const TokenMask stm = masks_for(query, {ScoreKind::kMaxSim, MaskKind::kStmOnly}, nullptr, mo);
    const TokenMask qtm = masks_for(query, {ScoreKind::kMaxSim, MaskKind::kQtmOnly}, nullptr, mo);
    maxima.resize(query.rows());
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      const auto& doc = corpus[d];
      token_maxima(query, doc, maxima);
      const double all = masked_sum(maxima, TokenMask::all(query.rows()));
      const double qtm_score = masked_sum(maxima, qtm);
      table.max_kind_residual = std::max(
          table.max_kind_residual, std::abs(all - (masked_sum(maxima, stm) + qtm_score)));
      if (lexical) {
        auto it = ocr_index->find(doc.id());
        if (it == ocr_index->end()) {
          throw DataError("no OCR token set for document '" + doc.id() + "'");
        }
        const auto lex =
            masks_for(query, {ScoreKind::kMaxSim, MaskKind::kQtmLexicalOnly}, &it->second, mo);
        const auto nonlex =
            masks_for(query, {ScoreKind::kMaxSim, MaskKind::kQtmNonLexicalOnly}, &it->second, mo);
        table.max_lexical_residual =
            std::max(*table.max_lexical_residual,
                     std::abs(qtm_score - (masked_sum(maxima, lex) + masked_sum(maxima, nonlex))));
      }
      ++table.pairs_checked;
    }
  }
  return table;
}

std::vector<nlohmann::json> to_json_lines(const AblationTable& table) {
  std::vector<nlohmann::json> lines;
  for (const auto& row : table.rows) {
    nlohmann::json line = {{"mask", std::string(to_string(row.mask))}, {"ndcg@5", row.ndcg_at_5}};
    line["delta_percent"] = row.delta_percent ? nlohmann::json(*row.delta_percent) : nullptr;
    lines.push_back(std::move(line));
  }
  nlohmann::json summary = {{"reference_ndcg@5", table.reference_ndcg},
                            {"pairs_checked", table.pairs_checked},
                            {"max_kind_residual", table.max_kind_residual}};
  summary["max_lexical_residual"] =
      table.max_lexical_residual ? nlohmann::json(*table.max_lexical_residual) : nullptr;
  lines.push_back({{"summary", std::move(summary)}});
  return lines;
}

std::string to_tsv(const AblationTable& table) {
  std::ostringstream out;
  out << "mask\tndcg@5\tdelta_percent\n";
  char buf[64];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%.4f", row.ndcg_at_5);
    out << to_string(row.mask) << '\t' << buf << '\t';
    if (row.delta_percent) {
      std::snprintf(buf, sizeof(buf), "%+.1f%%", *row.delta_percent);
      out << buf;
    } else {
      out << "n/a";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace vdr
