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

#include "stormrider/learn/hyperparameters.hpp"

#include <cmath>

#include "stormrider/csv.hpp"
#include "stormrider/errors.hpp"

namespace stormrider::learn {
namespace {

double to_number(std::string_view key, std::string_view value) {
  auto v = parse_double(value);
  if (!v || !std::isfinite(*v)) {
    throw ConfigError("hyperparameter '" + std::string(key) + "': bad value '" + std::string(value) + "'");
  }
  return *v;
}

int to_int(std::string_view key, std::string_view value) {
  const double v = to_number(key, value);
  if (v != std::floor(v)) {
    throw ConfigError("hyperparameter '" + std::string(key) + "' must be an integer");
  }
  return static_cast<int>(v);
}

}  // namespace

std::string_view to_string(Algorithm a) { return a == Algorithm::kRandomForest ? "rf" : "gbdt"; }

std::string_view to_string(Objective o) { return o == Objective::kSquared ? "squared" : "tweedie"; }

Hyperparameters Hyperparameters::random_forest() {
  Hyperparameters hp;
  hp.algorithm = Algorithm::kRandomForest;
  hp.objective = Objective::kSquared;
  hp.learning_rate = 1.0;
  hp.n_trees = 76;
  hp.mtry = 13;
  hp.max_depth = 30;
  hp.min_obs_leaf = 3;
  hp.n_bins = 25;
  hp.row_sample_rate = 0.95;
  hp.col_sample_rate_per_tree = 1.0;
  hp.gamma = 0.0;
  hp.lambda = 0.0;
  return hp;
}

Hyperparameters Hyperparameters::xgboost() {
  Hyperparameters hp;
  hp.algorithm = Algorithm::kGbdt;
  hp.objective = Objective::kSquared;
  hp.learning_rate = 0.3;
  hp.n_trees = 55;
  hp.max_depth = 3;
  hp.min_obs_leaf = 5;
  hp.row_sample_rate = 0.55;
  hp.col_sample_rate_per_tree = 0.3;
  hp.gamma = 1e-8;
  return hp;
}

Hyperparameters Hyperparameters::tweedie() {
  Hyperparameters hp;
  hp.algorithm = Algorithm::kGbdt;
  hp.objective = Objective::kTweedie;
  hp.learning_rate = 0.05;
  hp.n_trees = 1000;
  hp.max_depth = 10;
  hp.min_obs_leaf = 1;
  hp.row_sample_rate = 0.55;
  hp.col_sample_rate_per_tree = 0.9;
  hp.gamma = 1e-4;
  hp.tweedie_power = 1.06;
  return hp;
}

bool is_known_preset(std::string_view name) {
  return name == "rf" || name == "xgb" || name == "tweedie";
}

Hyperparameters Hyperparameters::preset(std::string_view name) {
  if (name == "rf") return random_forest();
  if (name == "xgb") return xgboost();
  if (name == "tweedie") return tweedie();
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected rf, xgb or tweedie)");
}

void Hyperparameters::set(std::string_view key, std::string_view value) {
  if (key == "algorithm") {
    if (value == "rf") {
      algorithm = Algorithm::kRandomForest;
    } else if (value == "gbdt") {
      algorithm = Algorithm::kGbdt;
    } else {
      throw ConfigError("algorithm must be rf or gbdt");
    }
  } else if (key == "objective") {
    if (value == "squared") {
      objective = Objective::kSquared;
    } else if (value == "tweedie") {
      objective = Objective::kTweedie;
    } else {
      throw ConfigError("objective must be squared or tweedie");
    }
  } else if (key == "learning_rate") {
    learning_rate = to_number(key, value);
  } else if (key == "n_trees") {
    n_trees = to_int(key, value);
  } else if (key == "mtry") {
    mtry = to_int(key, value);
  } else if (key == "max_depth") {
    max_depth = to_int(key, value);
  } else if (key == "min_obs_leaf") {
    min_obs_leaf = to_int(key, value);
  } else if (key == "n_bins") {
    n_bins = to_int(key, value);
  } else if (key == "row_sample_rate") {
    row_sample_rate = to_number(key, value);
  } else if (key == "col_sample_rate_per_tree") {
    col_sample_rate_per_tree = to_number(key, value);
  } else if (key == "gamma") {
    gamma = to_number(key, value);
  } else if (key == "lambda") {
    lambda = to_number(key, value);
  } else if (key == "tweedie_power") {
    tweedie_power = to_number(key, value);
  } else if (key == "seed") {
    const double v = to_number(key, value);
    if (v < 0 || v != std::floor(v)) throw ConfigError("seed must be a non-negative integer");
    seed = static_cast<std::uint64_t>(v);
  } else {
    throw ConfigError("unknown hyperparameter '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> Hyperparameters::to_pairs() const {
  return {
      {"algorithm", std::string(to_string(algorithm))},
      {"objective", std::string(to_string(objective))},
      {"learning_rate", format_double(learning_rate)},
      {"n_trees", std::to_string(n_trees)},
      {"mtry", std::to_string(mtry)},
      {"max_depth", std::to_string(max_depth)},
      {"min_obs_leaf", std::to_string(min_obs_leaf)},
      {"n_bins", std::to_string(n_bins)},
      {"row_sample_rate", format_double(row_sample_rate)},
      {"col_sample_rate_per_tree", format_double(col_sample_rate_per_tree)},
      {"gamma", format_double(gamma)},
      {"lambda", format_double(lambda)},
      {"tweedie_power", format_double(tweedie_power)},
      {"seed", std::to_string(seed)},
  };
}

void Hyperparameters::validate(std::size_t n_features) const {
  auto in_unit = [](double r) { return r > 0.0 && r <= 1.0; };
  if (n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (max_depth < 0) throw ConfigError("max_depth must be >= 0 (0 = unlimited)");
  if (min_obs_leaf < 1) throw ConfigError("min_obs_leaf must be >= 1");
  if (n_bins < 2 || n_bins > 256) throw ConfigError("n_bins must lie in [2, 256]");
  if (!in_unit(row_sample_rate)) throw ConfigError("row_sample_rate must lie in (0, 1]");
  if (!in_unit(col_sample_rate_per_tree)) {
    throw ConfigError("col_sample_rate_per_tree must lie in (0, 1]");
  }
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (algorithm == Algorithm::kGbdt && !(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ConfigError("learning_rate must lie in (0, 1]");
  }
  if (objective == Objective::kTweedie && !(tweedie_power > 1.0 && tweedie_power < 2.0)) {
    throw ConfigError("tweedie_power must lie in (1, 2)");
  }
  if (algorithm == Algorithm::kRandomForest) {
    if (objective != Objective::kSquared) throw ConfigError("random forest supports the squared objective only");
    if (mtry < 0 || static_cast<std::size_t>(mtry) > n_features) {
      throw ConfigError("mtry " + std::to_string(mtry) + " exceeds the " +
                        std::to_string(n_features) + " available features");
    }
  }
}

}  // namespace stormrider::learn
