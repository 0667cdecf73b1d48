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

#include "stormrider/learn/model_selection.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "common.hpp"
#include "stormrider/errors.hpp"
#include "stormrider/learn/forest.hpp"
#include "stormrider/learn/gbdt.hpp"

namespace stormrider::learn {

TreeEnsemble fit(const FeatureMatrix& x, std::span<const double> y, const Hyperparameters& hp,
                 std::vector<std::string> schema) {
  return hp.algorithm == Algorithm::kRandomForest ? fit_random_forest(x, y, hp, std::move(schema))
                                                  : fit_gbdt(x, y, hp, std::move(schema));
}

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("kfold: need at least 2 folds");
  if (n < static_cast<std::size_t>(k)) throw std::invalid_argument("kfold: fewer rows than folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, 0x6b666f6c64ULL);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) folds[i % folds.size()].push_back(order[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

double kfold_cv(const FeatureMatrix& x, std::span<const double> y, const Hyperparameters& hp, int k,
                std::uint64_t seed) {
  if (y.size() != x.rows()) throw std::invalid_argument("kfold: target length differs from row count");
  const auto folds = kfold_partition(x.rows(), k, seed);
  std::vector<std::uint8_t> held(x.rows());
  double total = 0.0;
  for (const auto& fold : folds) {
    std::fill(held.begin(), held.end(), 0);
    for (const auto r : fold) held[r] = 1;
    std::vector<std::size_t> train;
    train.reserve(x.rows() - fold.size());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (!held[r]) train.push_back(r);
    }
    std::vector<double> y_train(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) y_train[i] = y[train[i]];
    const TreeEnsemble model = fit(x.gather(train), y_train, hp);
    const auto pred = predict(model, x.gather(fold));
    double sse = 0.0;
    for (std::size_t i = 0; i < fold.size(); ++i) {
      const double e = pred[i] - y[fold[i]];
      sse += e * e;
    }
    total += sse / static_cast<double>(fold.size());
  }
  return total / static_cast<double>(folds.size());
}

std::uint64_t SearchSpace::combinations() const {
  std::uint64_t n = 1;
  for (const auto& [key, values] : axes) {
    if (values.empty()) throw ConfigError("search space: no candidates for '" + key + "'");
    if (n > std::numeric_limits<std::uint64_t>::max() / values.size())
      throw ConfigError("search space: too many combinations");
    n *= values.size();
  }
  return n;
}

Hyperparameters SearchSpace::at(std::uint64_t index) const {
  Hyperparameters hp = base;
  for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
    const auto radix = it->second.size();
    hp.set(it->first, it->second[index % radix]);
    index /= radix;
  }
  return hp;
}

SearchSpace load_search_space(const KvConfig& config, std::string_view section) {
  if (!config.has_section(section)) throw ConfigError("search space: missing [" + std::string(section) + "]");
  SearchSpace space;
  const std::string prefix = std::string(section) + ".";
  space.base = Hyperparameters::preset(config.string_or(prefix + "preset", "xgb"));
  for (const auto& key : config.keys_in(section)) {
    if (key == "preset") continue;
    auto values = config.as_strings(prefix + key);
    space.axes.emplace_back(key, std::move(*values));
    // Fail early on unknown keys or bad values.
    for (const auto& v : space.axes.back().second) Hyperparameters(space.base).set(key, v);
  }
  if (space.axes.empty()) throw ConfigError("search space: no hyperparameters to vary");
  return space;
}

SearchResult random_grid_search(const FeatureMatrix& x, std::span<const double> y, const SearchSpace& space,
                                std::uint64_t budget, std::uint64_t seed, int folds) {
  if (budget < 1) throw std::invalid_argument("grid search: budget must be at least 1");
  const std::uint64_t total = space.combinations();
  const std::uint64_t draws = std::min(budget, total);

  Rng rng(seed, 0x67726964ULL);
  std::vector<std::uint64_t> order;
  if (total <= (1ULL << 20)) {
    std::vector<std::uint64_t> pool(total);
    std::iota(pool.begin(), pool.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < draws; ++i) {
      const auto j = i + rng.below(total - i);
      std::swap(pool[i], pool[j]);
    }
    order.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(draws));
  } else {
    std::unordered_set<std::uint64_t> seen;
    while (order.size() < draws) {
      const auto c = rng.below(total);
      if (seen.insert(c).second) order.push_back(c);
    }
  }

  SearchResult result;
  result.best_mse = std::numeric_limits<double>::infinity();
  for (const auto c : order) {
    SearchTrial trial{c, space.at(c), 0.0};
    trial.params.validate(x.cols());
    trial.cv_mse = kfold_cv(x, y, trial.params, folds, seed);
    if (result.trials.empty() || trial.cv_mse < result.best_mse) {
      result.best = trial.params;
      result.best_mse = trial.cv_mse;
    }
    result.trials.push_back(std::move(trial));
  }
  return result;
}

}  // namespace stormrider::learn
