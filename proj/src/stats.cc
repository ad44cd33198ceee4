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

#include "vdr/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace vdr {

namespace {

// Doubled average ranks (integers) of the pooled sample, plus the tie term
// sum(t^3 - t) over tie groups.
struct PooledRanks {
  std::vector<std::int64_t> doubled;  // a values first, then b values
  double tie_term = 0.0;
};

PooledRanks pooled_ranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> values(a.begin(), a.end());
  values.insert(values.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  PooledRanks out;
  out.doubled.assign(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // ranks i+1 .. j+1 share (i + j + 2) / 2
    const auto doubled = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t t = i; t <= j; ++t) out.doubled[order[t]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    out.tie_term += t * t * t - t;
    i = j + 1;
  }
  return out;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

std::string_view to_string(Alternative alternative) {
  return alternative == Alternative::kAGreater ? "a_greater" : "two_sided";
}

Alternative alternative_from_string(std::string_view name) {
  if (name == "a_greater" || name == "greater") return Alternative::kAGreater;
  if (name == "two_sided" || name == "two-sided") return Alternative::kTwoSided;
  throw ArgumentError("unknown alternative '" + std::string(name) +
                      "' (expected a_greater|two_sided)");
}

MannWhitneyResult mann_whitney(std::span<const double> group_a, std::span<const double> group_b,
                               Alternative alternative) {
  if (group_a.empty() || group_b.empty()) {
    throw ArgumentError("Mann-Whitney U needs two nonempty groups");
  }
  const std::size_t na = group_a.size();
  const std::size_t nb = group_b.size();
  const std::size_t n = na + nb;
  const auto ranks = pooled_ranks(group_a, group_b);

  std::int64_t doubled_sum_a = 0;
  for (std::size_t i = 0; i < na; ++i) doubled_sum_a += ranks.doubled[i];
  const double rank_sum_a = static_cast<double>(doubled_sum_a) / 2.0;

  MannWhitneyResult result;
  result.u_a = rank_sum_a - static_cast<double>(na * (na + 1)) / 2.0;
  result.u_b = static_cast<double>(na * nb) - result.u_a;

  // Doubled expected rank sum of group A under the null: na (n + 1).
  const auto doubled_mean = static_cast<std::int64_t>(na * (n + 1));

  if (n <= kExactLimit) {
    result.exact = true;
    std::uint64_t hits = 0;
    std::uint64_t total = 0;
    const std::int64_t observed_dev = std::abs(doubled_sum_a - doubled_mean);
    for (std::uint32_t subset = 0; subset < (1u << n); ++subset) {
      if (static_cast<std::size_t>(std::popcount(subset)) != na) continue;
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (subset & (1u << i)) s += ranks.doubled[i];
      }
      ++total;
      if (alternative == Alternative::kAGreater) {
        hits += s >= doubled_sum_a;
      } else {
        hits += std::abs(s - doubled_mean) >= observed_dev;
      }
    }
    result.p = static_cast<double>(hits) / static_cast<double>(total);
    return result;
  }

  const double nad = static_cast<double>(na);
  const double nbd = static_cast<double>(nb);
  const double nd = static_cast<double>(n);
  const double mean_u = nad * nbd / 2.0;
  const double variance = nad * nbd / 12.0 * ((nd + 1.0) - ranks.tie_term / (nd * (nd - 1.0)));
  if (!(variance > 0.0)) {
    result.p = 1.0;  // every value tied
    return result;
  }
  const double sigma = std::sqrt(variance);
  if (alternative == Alternative::kAGreater) {
    result.p = normal_sf((result.u_a - mean_u - 0.5) / sigma);
  } else {
    const double z = (std::abs(result.u_a - mean_u) - 0.5) / sigma;
    result.p = std::min(1.0, 2.0 * normal_sf(z));
  }
  result.p = std::clamp(result.p, 0.0, 1.0);
  return result;
}

GroupSplit split_by_top1(std::span<const Ranking> rankings, const Qrels& qrels,
                         const std::map<std::string, VisualFeatures>& features) {
  GroupSplit split;
  for (const auto& ranking : rankings) {
    auto judged = qrels.find(ranking.query_id);
    if (judged == qrels.end()) {
      throw EvaluationError("no qrels entry for query '" + ranking.query_id + "'");
    }
    const std::string* top = ranking.hits.empty() ? nullptr : &ranking.hits.front().doc_id;
    for (const auto& [doc_id, grade] : judged->second) {
      if (grade <= 0) continue;
      auto f = features.find(doc_id);
      if (f == features.end()) {
        throw DataError("no visual features for relevant document '" + doc_id + "' (query '" +
                        ranking.query_id + "')");
      }
      FeatureRecord record{ranking.query_id, doc_id, f->second};
      if (top && *top == doc_id) {
        split.group_a.push_back(std::move(record));
      } else {
        split.group_b.push_back(std::move(record));
      }
    }
  }
  return split;
}

std::string_view to_string(Feature feature) {
  switch (feature) {
    case Feature::kTextCoverage:
      return "c_text";
    case Feature::kNonTextCoverage:
      return "c_nontext";
    case Feature::kBackgroundCoverage:
      return "c_background";
    case Feature::kTokenCount:
      return "token_count";
  }
  return "c_text";
}

double feature_value(const VisualFeatures& features, Feature feature) {
  switch (feature) {
    case Feature::kTextCoverage:
      return features.c_text;
    case Feature::kNonTextCoverage:
      return features.c_nontext;
    case Feature::kBackgroundCoverage:
      return features.c_background;
    case Feature::kTokenCount:
      return static_cast<double>(features.token_count);
  }
  return 0.0;
}

SignificanceMatrix feature_significance(std::span<const DatasetSplit> datasets,
                                        std::span<const Feature> features,
                                        Alternative alternative) {
  SignificanceMatrix matrix;
  matrix.alternative = alternative;
  matrix.features.assign(features.begin(), features.end());
  for (const auto& d : datasets) matrix.datasets.push_back(d.dataset);
  for (Feature feature : features) {
    std::vector<std::optional<MannWhitneyResult>> row;
    for (const auto& d : datasets) {
      if (d.split.group_a.empty() || d.split.group_b.empty()) {
        row.emplace_back(std::nullopt);
        continue;
      }
      std::vector<double> a, b;
      for (const auto& r : d.split.group_a) a.push_back(feature_value(r.features, feature));
      for (const auto& r : d.split.group_b) b.push_back(feature_value(r.features, feature));
      row.emplace_back(mann_whitney(a, b, alternative));
    }
    matrix.cells.push_back(std::move(row));
  }
  return matrix;
}

std::vector<nlohmann::json> to_json_lines(const SignificanceMatrix& matrix) {
  std::vector<nlohmann::json> lines;
  for (std::size_t f = 0; f < matrix.features.size(); ++f) {
    for (std::size_t d = 0; d < matrix.datasets.size(); ++d) {
      nlohmann::json line = {{"feature", std::string(to_string(matrix.features[f]))},
                             {"dataset", matrix.datasets[d]},
                             {"alternative", std::string(to_string(matrix.alternative))}};
      const auto& cell = matrix.cells[f][d];
      if (cell) {
        line["computable"] = true;
        line["u_a"] = cell->u_a;
        line["u_b"] = cell->u_b;
        line["p"] = cell->p;
        line["exact"] = cell->exact;
      } else {
        line["computable"] = false;
        line["p"] = nullptr;
      }
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

std::string to_tsv(const SignificanceMatrix& matrix) {
  std::ostringstream out;
  out << "feature";
  for (const auto& d : matrix.datasets) out << '\t' << d;
  out << '\n';
  for (std::size_t f = 0; f < matrix.features.size(); ++f) {
    out << to_string(matrix.features[f]);
    for (const auto& cell : matrix.cells[f]) {
      if (cell) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", cell->p);
        out << '\t' << buf;
      } else {
        out << "\tn/a";
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace vdr
