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

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vdr/coverage.hpp"
#include "vdr/evaluation.hpp"

namespace vdr {

enum class Alternative { kAGreater, kTwoSided };

std::string_view to_string(Alternative alternative);
Alternative alternative_from_string(std::string_view name);

struct MannWhitneyResult {
  double u_a = 0.0;  // pairs (a, b) with a > b, ties counting 1/2
  double u_b = 0.0;
  double p = 1.0;
  bool exact = false;
};

// Rank-sum test with average ranks for ties. Exact permutation distribution
// when n_a + n_b <= 12, otherwise the normal approximation with
// tie-corrected variance and continuity correction.
MannWhitneyResult mann_whitney(std::span<const double> group_a, std::span<const double> group_b,
                               Alternative alternative = Alternative::kAGreater);

inline constexpr std::size_t kExactLimit = 12;

struct FeatureRecord {
  std::string query_id;
  std::string doc_id;
  VisualFeatures features;
};

// Relevant documents ranked first by their query (group A) versus relevant
// documents that were not (group B).
struct GroupSplit {
  std::vector<FeatureRecord> group_a;
  std::vector<FeatureRecord> group_b;
};

GroupSplit split_by_top1(std::span<const Ranking> rankings, const Qrels& qrels,
                         const std::map<std::string, VisualFeatures>& features);

enum class Feature { kTextCoverage, kNonTextCoverage, kBackgroundCoverage, kTokenCount };
inline constexpr std::array<Feature, 4> kAllFeatures = {
    Feature::kTextCoverage, Feature::kNonTextCoverage, Feature::kBackgroundCoverage,
    Feature::kTokenCount};

std::string_view to_string(Feature feature);
double feature_value(const VisualFeatures& features, Feature feature);

struct DatasetSplit {
  std::string dataset;
  GroupSplit split;
};

// cells[f][d] is empty when either group of dataset d is empty.
struct SignificanceMatrix {
  std::vector<Feature> features;
  std::vector<std::string> datasets;
  std::vector<std::vector<std::optional<MannWhitneyResult>>> cells;
  Alternative alternative = Alternative::kAGreater;
};

SignificanceMatrix feature_significance(std::span<const DatasetSplit> datasets,
                                        std::span<const Feature> features = kAllFeatures,
                                        Alternative alternative = Alternative::kAGreater);

std::vector<nlohmann::json> to_json_lines(const SignificanceMatrix& matrix);
std::string to_tsv(const SignificanceMatrix& matrix);

}  // namespace vdr
