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
#include <fstream>
#include <ostream>

#include "vdr/analysis.hpp"

namespace vdr {

void export_simmap(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                   std::ostream& out) {
  if (!doc.grid()) {
    throw DataError("document '" + doc.id() + "' has no patch grid; cannot export a similarity map");
  }
  doc.validate();
  const Grid grid = *doc.grid();
  const auto sims = similarity_matrix(query, doc);
  const std::size_t nd = doc.rows();
  for (std::size_t i = 0; i < query.rows(); ++i) {
    const auto first = sims.begin() + static_cast<std::ptrdiff_t>(i * nd);
    const auto best = std::max_element(first, first + static_cast<std::ptrdiff_t>(nd));
    const auto argmax = static_cast<std::size_t>(best - first);
    nlohmann::json line = {{"query_id", query.id()}, {"doc_id", doc.id()}, {"token_index", i}};
    if (query.has_tokens()) {
      line["text"] = query.tokens()[i].text;
      line["kind"] = std::string(to_string(query.tokens()[i].kind));
    } else {
      line["text"] = nullptr;
      line["kind"] = nullptr;
    }
    line["similarities"] = std::vector<float>(first, first + static_cast<std::ptrdiff_t>(nd));
    line["argmax"] = argmax;
    line["row"] = argmax / grid.cols;
    line["col"] = argmax % grid.cols;
    line["max"] = *best;
    line["grid"] = {grid.rows, grid.cols};
    out << line.dump() << '\n';
  }
}

void export_simmap(const MultiVectorEmbedding& query, const MultiVectorEmbedding& doc,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  export_simmap(query, doc, out);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace vdr
