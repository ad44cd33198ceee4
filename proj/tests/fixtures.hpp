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

#include <optional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vdr/corpus_store.hpp"

namespace vdr::testing {

inline MultiVectorEmbedding embedding(std::string id, const Matrix& rows,
                                      std::vector<TokenMeta> tokens = {},
                                      std::optional<Grid> grid = std::nullopt) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  std::vector<float> values;
  for (const auto& r : rows) {
    for (double v : r) values.push_back(static_cast<float>(v));
  }
  return {std::move(id), dim, std::move(values), grid, std::move(tokens)};
}

// Float rows as the engine stores them, widened back for the oracles.
inline Matrix rows_of(const MultiVectorEmbedding& e) {
  Matrix m;
  for (std::size_t r = 0; r < e.rows(); ++r) {
    auto row = e.row(r);
    m.emplace_back(row.begin(), row.end());
  }
  return m;
}

}  // namespace vdr::testing
