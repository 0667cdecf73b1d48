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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stormrider/kv_config.hpp"
#include "stormrider/learn/ensemble.hpp"
#include "stormrider/learn/hyperparameters.hpp"
#include "stormrider/panel.hpp"

namespace stormrider::learn {

/// Dispatches to the forest or the booster by `hp.algorithm`.
TreeEnsemble fit(const FeatureMatrix& x, std::span<const double> y, const Hyperparameters& hp,
                 std::vector<std::string> schema = {});

/// Random partition of rows [0, n) into k folds of near-equal size.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, int k, std::uint64_t seed);

/// Mean over folds of the held-out mean squared error (ridership scale) of
/// a model fitted on the other k - 1 folds. Requires k >= 2 and n >= k.
double kfold_cv(const FeatureMatrix& x, std::span<const double> y, const Hyperparameters& hp, int k,
                std::uint64_t seed);

/// Candidate values per hyperparameter, applied on top of `base`.
struct SearchSpace {
  Hyperparameters base;
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;

  [[nodiscard]] std::uint64_t combinations() const;
  /// Settings for combination `index` (mixed radix, first axis slowest;
  /// axes loaded from a config are in key order).
  [[nodiscard]] Hyperparameters at(std::uint64_t index) const;
};

/// Reads `[space]` from a config: `preset = "xgb"` picks the base settings,
/// every other key lists candidates (`max_depth = [3, 5, 8]`).
SearchSpace load_search_space(const KvConfig& config, std::string_view section = "space");

struct SearchTrial {
  std::uint64_t combination = 0;
  Hyperparameters params;
  double cv_mse = 0.0;
};

struct SearchResult {
  Hyperparameters best;
  double best_mse = 0.0;
  std::vector<SearchTrial> trials;  // in draw order
};

/// Evaluates `budget` distinct combinations drawn uniformly (all of them
/// when the budget covers the grid) and keeps the lowest CV error; ties go
/// to the earliest draw.
SearchResult random_grid_search(const FeatureMatrix& x, std::span<const double> y, const SearchSpace& space,
                                std::uint64_t budget, std::uint64_t seed, int folds = 5);

}  // namespace stormrider::learn
