// Copyright 2026 The Stormrider Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stormrider/learn/hyperparameters.hpp"
#include "stormrider/panel.hpp"

namespace stormrider::learn {

/// A node of a regression tree. Internal nodes route `x[feature] <= threshold`
/// to `left`. Leaves have feature == -1 and carry a raw-score value.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  /// Direction for a missing value; panels are complete, so this is carried
  /// in the format but never consulted.
  bool default_left = true;
  double value = 0.0;
  /// Loss reduction of the split (internal nodes).
  double gain = 0.0;
  /// Training rows that reached the node.
  std::uint32_t cover = 0;
  /// Histogram bin of the threshold; training-time only, not serialised.
  std::uint8_t bin = 0;

  [[nodiscard]] bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode& o) const {
    return feature == o.feature && threshold == o.threshold && left == o.left &&
           right == o.right && default_left == o.default_left && value == o.value &&
           gain == o.gain && cover == o.cover;
  }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  template <class RowAccess>
  [[nodiscard]] double predict(RowAccess&& x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
      const auto& n = nodes[i];
      i = static_cast<std::size_t>(static_cast<double>(x(static_cast<std::size_t>(n.feature))) <= n.threshold
                                       ? n.left
                                       : n.right);
    }
    return nodes[i].value;
  }
  [[nodiscard]] int depth() const;

  bool operator==(const Tree&) const = default;
};

enum class ModelKind : std::uint8_t { kRandomForest, kGbdt };

/// A fitted random forest or boosted ensemble.
struct TreeEnsemble {
  ModelKind kind = ModelKind::kGbdt;
  Objective objective = Objective::kSquared;
  double tweedie_power = 1.5;
  double base_score = 0.0;
  double learning_rate = 1.0;
  std::vector<Tree> trees;
  std::vector<std::string> feature_schema;
  /// Settings the model was trained with (provenance only).
  std::vector<std::pair<std::string, std::string>> params;

  /// Forest: mean of tree outputs. Boosting: base + sum of lr * tree, added
  /// tree by tree.
  template <class RowAccess>
  [[nodiscard]] double raw_score(RowAccess&& x) const {
    if (kind == ModelKind::kRandomForest) {
      if (trees.empty()) return base_score;
      // Summed in sorted order so the mean ignores tree order exactly.
      thread_local std::vector<double> outputs;
      outputs.clear();
      for (const auto& t : trees) outputs.push_back(t.predict(x));
      std::sort(outputs.begin(), outputs.end());
      double sum = 0.0;
      for (const double v : outputs) sum += v;
      return sum / static_cast<double>(trees.size());
    }
    double score = base_score;
    for (const auto& t : trees) score += learning_rate * t.predict(x);
    return score;
  }

  /// Maps a raw score to the ridership scale: exp for Tweedie, clamped at 0
  /// for squared-error boosting, identity for forests.
  [[nodiscard]] double response(double raw) const;

  /// Per-feature split gain summed over every tree.
  [[nodiscard]] std::vector<double> gain_by_feature() const;

  [[nodiscard]] std::string serialize() const;
  static TreeEnsemble deserialize(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static TreeEnsemble load(const std::filesystem::path& path);

  bool operator==(const TreeEnsemble&) const = default;
};

/// The 43 panel column names, as a schema.
std::vector<std::string> panel_schema();

/// Ridership-scale predictions for every row. Throws std::invalid_argument
/// when `schema` (the column names of `x`) differs from the model's.
std::vector<double> predict(const TreeEnsemble& model, const FeatureMatrix& x,
                            std::span<const std::string> schema);
std::vector<double> predict(const TreeEnsemble& model, const FeatureMatrix& x);

/// Raw scores (before the response transform).
std::vector<double> predict_raw(const TreeEnsemble& model, const FeatureMatrix& x);

/// Total split gain per feature divided by the largest total, so the most
/// useful feature scores 1 and unused features 0. All zeros without splits.
std::vector<double> variable_importance(const TreeEnsemble& model);

}  // namespace stormrider::learn
