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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stormrider::learn {

enum class Algorithm : std::uint8_t { kRandomForest, kGbdt };
enum class Objective : std::uint8_t { kSquared, kTweedie };

std::string_view to_string(Algorithm a);
std::string_view to_string(Objective o);

/// Settings for both learners. Fields a learner does not use are ignored.
struct Hyperparameters {
  Algorithm algorithm = Algorithm::kGbdt;
  Objective objective = Objective::kSquared;
  double learning_rate = 0.3;
  int n_trees = 55;
  /// Features sampled per split (random forest only); 0 means all.
  int mtry = 0;
  /// 0 means unlimited.
  int max_depth = 3;
  int min_obs_leaf = 5;
  /// Histogram bins per feature, 2..256.
  int n_bins = 256;
  double row_sample_rate = 1.0;
  double col_sample_rate_per_tree = 1.0;
  /// Minimum split gain.
  double gamma = 0.0;
  /// Leaf L2 regulariser.
  double lambda = 1.0;
  double tweedie_power = 1.5;
  std::uint64_t seed = 1;

  /// Random forest: 76 trees, 13 variables per split, depth 30, 3 rows per
  /// leaf, 25 bins, 0.95 row sample per tree.
  static Hyperparameters random_forest();
  /// Squared-error boosting: 55 trees, rate 0.3, depth 3, 5 rows per leaf,
  /// row sample 0.55, column sample 0.3, gamma 1e-8.
  static Hyperparameters xgboost();
  /// Tweedie boosting: 1000 trees, rate 0.05, depth 10, 1 row per leaf,
  /// row sample 0.55, column sample 0.9, gamma 1e-4, power 1.06.
  static Hyperparameters tweedie();
  /// "rf", "xgb" or "tweedie". Throws ConfigError otherwise.
  static Hyperparameters preset(std::string_view name);

  /// Sets one field from text ("learning_rate", "0.1"). Throws ConfigError
  /// on unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> to_pairs() const;

  /// Throws ConfigError when a field is out of range for `n_features`.
  void validate(std::size_t n_features) const;

  bool operator==(const Hyperparameters&) const = default;
};

/// Names accepted by Hyperparameters::preset.
bool is_known_preset(std::string_view name);

}  // namespace stormrider::learn
